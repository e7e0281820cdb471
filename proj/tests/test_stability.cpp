#include "bates/errors.hpp"
#include "bates/stability.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numbers>

using namespace bates;
using namespace bates::stability;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("consistency at the origin") {
    const StabilityPoint zero{};
    for (double theta : {1.0 / 3.0, 0.5, 1.0}) {
        CHECK(eval_R(zero, theta) == cplx(1.0));
        CHECK(eval_S(zero, theta) == cplx(1.0));
        const auto t = eval_T(zero, theta);
        CHECK(t.t1 == cplx(1.0));
        CHECK(t.t0 == cplx(0.0));
        CHECK(eval_Q(0.0, 0.0, 0.0, theta) == cplx(1.0));
    }
}

TEST_CASE("known values") {
    CHECK(std::abs(eval_R({0.0, 0.0, -3.0, -3.0}, 1.0 / 3.0) - (-0.125)) < 1e-15);
    // R0 = 0 at the Theorem 3(b) point for theta = 1/2
    const double th = 0.5;
    CHECK(std::abs(eval_R({0.0, 0.0, -1.0 / th, -1.0 / th}, th)) < 1e-15);
    const double big = 1e6;
    CHECK(std::abs(eval_Q(0.0, -big, -big, 0.5)) < 1e-5);
    CHECK_THROWS_AS(eval_R({0.0, 0.0, 2.0, -1.0}, 0.5), PoleError);
    CHECK_THROWS_AS(eval_Q(0.0, 1.0, -1.0, 1.0), PoleError);
}

TEST_CASE("reduction identities and symmetry") {
    ConditionSampler smp(5);
    for (int k = 0; k < 10000; ++k) {
        StabilityPoint pt = smp.cond2(k % 2 == 1);
        const double theta = k % 3 == 0 ? 1.0 / 3.0 : (k % 3 == 1 ? 0.5 : 0.75);
        const StabilityPoint shifted{0.0, pt.w0 + pt.z0, pt.z1, pt.z2};
        CHECK(rel(eval_R(pt, theta), eval_R(shifted, theta)) <= 1e-12);

        const StabilityPoint swapped{pt.w0, pt.z0, pt.z2, pt.z1};
        CHECK(rel(eval_R(pt, theta), eval_R(swapped, theta)) <= 1e-12);
        CHECK(rel(eval_S(pt, theta), eval_S(swapped, theta)) <= 1e-12);
        CHECK(rel(eval_T(pt, theta).t1, eval_T(swapped, theta).t1) <= 1e-12);
        CHECK(rel(eval_T(pt, theta).t0, eval_T(swapped, theta).t0) <= 1e-12);
        CHECK(rel(eval_Q(pt.z0, pt.z1, pt.z2, theta), eval_Q(pt.z0, pt.z2, pt.z1, theta)) <= 1e-12);

        StabilityPoint nojump = pt;
        nojump.w0 = 0.0;
        const cplx r = eval_R(nojump, theta);
        CHECK(rel(eval_S(nojump, theta), r) <= 1e-14);
        CHECK(rel(eval_T(nojump, theta).t1, r) <= 1e-15);
        CHECK(eval_T(nojump, theta).t0 == cplx(0.0));
    }
}

TEST_CASE("two-step coefficients through R0") {
    ConditionSampler smp(6);
    for (int k = 0; k < 10000; ++k) {
        const StabilityPoint pt = smp.cond2(false);
        const cplx zsum = pt.z0 + pt.z1 + pt.z2;
        if (std::abs(zsum) < 1e-9) continue;
        for (double theta : {1.0 / 3.0, 0.5}) {
            const cplx r0 = eval_R({0.0, pt.z0, pt.z1, pt.z2}, theta);
            const auto t = eval_T(pt, theta);
            // (R0 - 1) / zsum = Q; compare with a scale set by |w0| |Q|
            const cplx q = eval_Q(pt.z0, pt.z1, pt.z2, theta);
            const double scale = 1e-12 * (1.0 + std::abs(pt.z() + 0.5 * pt.w0) * std::abs(q) + std::abs(pt.w0 * q));
            CHECK(std::abs(t.t0 - (-0.5 * pt.w0 * (r0 - 1.0) / zsum)) <= scale);
            CHECK(std::abs(t.t1 - (1.0 + (pt.z() + 0.5 * pt.w0) * (r0 - 1.0) / zsum)) <= scale);
        }
    }
}

TEST_CASE("Theorem 2 construction") {
    for (double x : {1.0, 10.0, 100.0})
        for (double xi : {1.0, 10.0, 100.0})
            for (double theta : {1.0 / 3.0, 0.5, 0.9}) {
                const cplx s = eval_S(theorem2_point(x, xi, false), theta);
                CHECK(std::abs(s - theorem2_closed_form(x, xi, theta)) <= 1e-12 * std::max(1.0, std::abs(s)));
            }
    for (double theta : {0.5, std::numbers::sqrt2 / 2.0}) {
        const double x = 1e8;
        const double s = eval_S(theorem2_point(x, x * x, false), theta).real();
        CHECK(std::abs(s - (1.0 - 1.0 / (theta * theta))) <= 1e-6);
    }
}

TEST_CASE("condition membership") {
    const StabilityPoint zero{};
    CHECK(cond_membership(zero, Condition::cond2));
    CHECK(cond_membership(zero, Condition::cond3));
    CHECK(cond_membership(zero, Condition::cond5));
    CHECK(cond_membership(zero, Condition::cond1, UnshiftedPair{}));
    CHECK_THROWS_AS(cond_membership(zero, Condition::cond1), ParameterError);
    CHECK_FALSE(cond_membership({1.0, 0.0, -0.4, -0.4}, Condition::cond2));
    CHECK(cond_membership({1.0, 0.0, -0.5, -0.5}, Condition::cond2));
    CHECK_FALSE(cond_membership({0.0, 0.0, 0.1, -1.0}, Condition::cond5));
    CHECK_FALSE(cond_membership({0.0, 2.1, -1.0, -1.0}, Condition::cond5));
    CHECK(cond_membership({0.0, 2.0, -1.0, -1.0}, Condition::cond5));
    CHECK(cond_membership({1.0, 1.0, -1.0, -1.0}, Condition::cond3));
    CHECK_FALSE(cond_membership({1.5, 1.0, -1.0, -1.0}, Condition::cond3));

    ConditionSampler smp(8);
    for (int k = 0; k < 10000; ++k) {
        CHECK(cond_membership(smp.cond2(k % 2 == 0, k % 3 == 0), Condition::cond2, std::nullopt, 1e-12));
        CHECK(cond_membership(smp.cond5(k % 2 == 0), Condition::cond5, std::nullopt, 1e-12));
    }
    smp = ConditionSampler(9);
    for (int k = 0; k < 1000; ++k) CHECK(smp.cond2(true, true).w0.real() >= 0.0);
}

TEST_CASE("Schur root criterion") {
    auto r = schur_stable(1.0, 0.0);
    CHECK(r.stable);
    CHECK(r.max_modulus == doctest::Approx(1.0));
    CHECK(r.schur_real.value());

    r = schur_stable(2.0, -1.0);
    CHECK_FALSE(r.stable);
    CHECK(std::abs(r.root1 - 1.0) < 1e-7);
    CHECK(std::abs(r.root2 - 1.0) < 1e-7);

    r = schur_stable(0.6, 0.5);
    const auto want = oracle::polynomial_roots({-0.5, -0.6, 1.0});
    CHECK(oracle::multiset_distance({r.root1, r.root2}, want) <= 1e-12);
    CHECK(r.max_modulus == doctest::Approx((0.6 + std::sqrt(2.36)) / 2).epsilon(1e-12));
    CHECK_FALSE(r.stable);
    CHECK_FALSE(r.schur_real.value());

    CHECK_FALSE(schur_stable(cplx(0.1, 0.2), 0.3).schur_real.has_value());
    CHECK(schur_stable(0.0, -1.0).stable);   // roots +-i, simple
    CHECK(schur_stable(0.0, 1.0).stable);    // roots +-1, simple
}

TEST_CASE("Schur verdict agrees with companion powers") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int checked = 0;
    while (checked < 1000) {
        const double t1 = u(rng), t0 = u(rng);
        const auto rep = schur_stable(t1, t0);
        if (std::abs(rep.max_modulus - 1.0) <= 1e-3) continue;
        ++checked;
        Eigen::Matrix2d c;
        c << t1, t0, 1.0, 0.0;
        Eigen::Matrix2d acc = Eigen::Matrix2d::Identity();
        double peak = 0.0;
        for (int n = 0; n < 10000; ++n) {
            acc = acc * c;
            peak = std::max(peak, acc.lpNorm<Eigen::Infinity>());
            if (peak > 1e12) break;
        }
        CHECK(rep.stable == (peak < 1e6));
        CHECK(rep.stable == rep.schur_real.value());
    }
}

TEST_CASE("theorem verification reports") {
    auto pass = [](TheoremId id, double theta, std::size_t n) {
        const auto rep = verify_theorem(id, theta, n, 99);
        CAPTURE(rep.to_text());
        return rep.passed;
    };
    CHECK(pass(TheoremId::T1a, 1.0 / 3.0, 20000));
    CHECK(pass(TheoremId::T1b, 0.5, 20000));
    CHECK(pass(TheoremId::T2a, 0.5, 2000));
    CHECK(pass(TheoremId::T2a, std::numbers::sqrt2 / 2.0, 2000));
    const auto t2 = verify_theorem(TheoremId::T2a, 1.0 / 3.0, 2000, 7);
    CHECK(t2.witness.has_value());
    CHECK(cond_membership(*t2.witness, Condition::cond2, std::nullopt, 1e-12));
    CHECK(std::abs(eval_S(*t2.witness, 1.0 / 3.0)) > 1.0);
    for (double theta : {1.0 / 3.0, 0.5, 0.75, 1.0}) {
        const auto rep = verify_theorem(TheoremId::T2b_neg, theta, 0, 1);
        CHECK(rep.passed);
        REQUIRE(rep.witness.has_value());
        CHECK(rep.witness->w0.real() < 0.0);
    }
    CHECK(pass(TheoremId::T3a, 1.0 / 3.0, 20000));
    CHECK(pass(TheoremId::T3a, 0.5, 20000));
    const auto t3 = verify_theorem(TheoremId::T3b, 0.9, 0, 1);
    CHECK(t3.passed);
    CHECK(t3.max_observed > 1.0);
    CHECK(verify_theorem(TheoremId::T3b, 0.95, 0, 1).max_observed <= 1.0);
    CHECK(pass(TheoremId::L1, 0.5, 20000));
    CHECK(pass(TheoremId::L2, 1.0 / 3.0, 20000));
    CHECK(pass(TheoremId::L2, 0.5, 20000));
    CHECK(pass(TheoremId::Thm2b, 0.5, 2000));
    CHECK(pass(TheoremId::Thm3b, 0.5, 2000));
    CHECK(pass(TheoremId::Thm3b, 1.0 / 3.0, 2000));
}

TEST_CASE("report serialization") {
    const auto rep = verify_theorem(TheoremId::L2, 0.5, 100, 3);
    const auto text = rep.to_text();
    CHECK(text.find("theorem = L2") != std::string::npos);
    CHECK(text.find("passed = true") != std::string::npos);
    CHECK(VerificationReport::csv_header() == "theorem,theta,samples,seed,max_observed,bound,violations,passed");
    CHECK(rep.to_csv_row().rfind("L2,", 0) == 0);
    CHECK(theorem_from_string("Thm3b") == TheoremId::Thm3b);
    CHECK_THROWS_AS(theorem_from_string("T9"), ParameterError);
    const auto again = verify_theorem(TheoremId::L2, 0.5, 100, 3);
    CHECK(again.to_text() == text);
}
