#include "bates/errors.hpp"
#include "bates/harness.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace bates;

TEST_CASE("benchmark cases") {
    const auto c1 = load_case("I").params;
    CHECK(c1.kappa == 2.0);
    CHECK(c1.eta == 0.04);
    CHECK(c1.sigma == 0.25);
    CHECK(c1.rho == -0.5);
    CHECK(c1.r == 0.03);
    CHECK(c1.lambda == 0.2);
    CHECK(c1.gamma == -0.5);
    CHECK(c1.delta == 0.4);
    CHECK(c1.T == 0.5);
    CHECK(c1.K == 100.0);
    const auto c4 = load_case("IV").params;
    CHECK(c4.kappa == 2.5);
    CHECK(c4.eta == 0.05);
    CHECK(c4.sigma == 0.6);
    CHECK(c4.rho == -0.8);
    CHECK(c4.r == 0.01);
    CHECK(c4.lambda == 10.0);
    CHECK(c4.gamma == -0.05);
    CHECK(c4.delta == 0.01);
    CHECK(c4.T == 5.0);
    CHECK_FALSE(c4.feller_satisfied());
    CHECK(load_case("III").params.lambda * load_case("III").params.T == 5.0);
    CHECK_FALSE(load_case("III").stiff_jumps());
    CHECK(load_case("IV").stiff_jumps());
    CHECK(load_case("I").params.feller_satisfied());
    CHECK_THROWS_AS(load_case("V"), ParameterError);
    CHECK(case_names().size() == 4);
}

TEST_CASE("log-spaced step counts") {
    const auto n = log_spaced_steps();
    CHECK(n.front() == 10);
    CHECK(n.back() == 1000);
    CHECK(n.size() == 20);
    for (std::size_t k = 1; k < n.size(); ++k) CHECK(n[k] > n[k - 1]);
    CHECK(figure_schemes().size() == 9);
}

TEST_CASE("region of interest") {
    const auto c = load_case("I");
    const SpatialGrid g = build_grid(c.params, c.grid);
    const auto roi = region_of_interest(g, c.params.K);
    CHECK_FALSE(roi.empty());
    std::size_t expected = 0;
    for (std::size_t j = 0; j < g.nv(); ++j)
        for (std::size_t i = 1; i < g.m1(); ++i) {
            const bool in = g.s[i] > 50 && g.s[i] < 150 && g.v[j] > 0 && g.v[j] < 1;
            if (in) {
                ++expected;
                CHECK(std::find(roi.begin(), roi.end(), g.index(i, j)) != roi.end());
            }
        }
    CHECK(roi.size() == expected);
}

namespace {

CaseConfig small(const std::string& name) {
    CaseConfig c = load_case(name);
    c.grid = {30, 15};
    return c;
}

}  // namespace

TEST_CASE("self comparison has zero error") {
    Experiment exp(small("I"), 200);
    CHECK(exp.temporal_error({1, Family::MCS, 1.0 / 3.0, 200}) == 0.0);
    CHECK(exp.temporal_error({2, Family::MCS, 1.0 / 3.0, 20}) > 0.0);
}

TEST_CASE("sweep csv") {
    Experiment exp(small("II"), 300);
    std::ostringstream empty;
    write_sweep_csv(empty, sweep(exp, {}, {10, 20}));
    CHECK(empty.str() == "case,adaptation,family,theta,N,error\n");

    const std::vector<SchemeSpec> schemes{{1, Family::MCS, 1.0 / 3.0}, {3, Family::Do, 0.5}};
    const auto rows1 = sweep(exp, schemes, {10, 20, 40}, 1);
    const auto rows2 = sweep(exp, schemes, {10, 20, 40}, 3);
    REQUIRE(rows1.size() == 6);
    std::ostringstream a, b;
    write_sweep_csv(a, rows1);
    write_sweep_csv(b, rows2);
    CHECK(a.str() == b.str());
    CHECK(rows1[0].adaptation == 1);
    CHECK(rows1[3].family == Family::Do);
    CHECK(rows1[4].n == 20);
    for (const auto& r : rows1) CHECK(r.error >= 0.0);
}

TEST_CASE("pricing and interpolation") {
    Experiment exp(small("I"), 10);
    const SchemeConfig scheme{1, Family::MCS, 1.0 / 3.0, 40};
    const auto res = exp.solve(scheme);
    const auto& g = exp.grid();
    const double T = exp.config().params.T;
    for (std::size_t j : {0u, 4u, 15u})
        for (std::size_t i : {1u, 10u, 29u})
            CHECK(interpolate(g, exp.operators(), res.u, T, g.s[i], g.v[j]) == res.u[g.index(i, j)]);
    CHECK(interpolate(g, exp.operators(), res.u, T, 0.0, 0.3) == exp.operators().boundary_value(T));
    CHECK(interpolate(g, exp.operators(), res.u, T, g.s.back(), 0.3) == 0.0);

    const double mid_s = 0.5 * (g.s[10] + g.s[11]);
    const double want = 0.5 * (res.u[g.index(10, 4)] + res.u[g.index(11, 4)]);
    CHECK(interpolate(g, exp.operators(), res.u, T, mid_s, g.v[4]) == doctest::Approx(want).epsilon(1e-14));

    const auto& p = exp.config().params;
    std::vector<std::pair<double, double>> q;
    for (double s : {60.0, 80.0, 100.0, 120.0, 140.0})
        for (double v : {0.01, 0.04, 0.5}) q.emplace_back(s, v);
    const auto prices = price(exp, scheme, q);
    for (std::size_t k = 0; k < q.size(); ++k)
        CHECK(prices[k] >= std::max(p.K * std::exp(-p.r * p.T) - q[k].first, 0.0) - 1e-2);
    CHECK_THROWS_AS(price(exp, scheme, {{900.0, 0.1}}), ParameterError);
    CHECK_THROWS_AS(price(exp, scheme, {{100.0, -0.1}}), ParameterError);
}

TEST_CASE("experiment cache directory") {
    const auto dir = std::filesystem::temp_directory_path() / "bates_harness_cache";
    std::filesystem::remove_all(dir);
    Experiment a(small("III"), 50, dir);
    const auto ref = a.reference();
    CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
    Experiment b(small("III"), 50, dir);
    CHECK(b.reference() == ref);
    std::filesystem::remove_all(dir);
}
