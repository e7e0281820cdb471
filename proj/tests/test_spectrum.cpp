#include "bates/harness.hpp"
#include "bates/operators.hpp"
#include "bates/spectrum.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace bates;

TEST_CASE("spectrum of the jump block lies in the unit disk") {
    for (const auto& name : case_names()) {
        const BatesParams p = load_case(name).params;
        const SpatialGrid g = build_grid(p, {60, 30});
        const SpectrumExport sp = jump_spectrum(g, p, name);
        CHECK(sp.values.size() == g.m1() - 1);
        CHECK(sp.case_label == name);
        CHECK(sp.m1 == 60);
        CHECK(sp.m2 == 30);
        CHECK(sp.max_modulus() <= 1.0 + 1e-8);
        for (auto v : sp.values) {
            const bool paired = std::any_of(sp.values.begin(), sp.values.end(),
                                            [&](auto w) { return std::abs(w - std::conj(v)) <= 1e-9; });
            CHECK(paired);
        }
    }
}

TEST_CASE("full block-diagonal J has the block spectrum with multiplicity") {
    const BatesParams p = load_case("II").params;
    const SpatialGrid g = build_grid(p, {10, 4});
    const SplitOperators ops = assemble(g, p);
    const Eigen::MatrixXd full = ops.dense_a0j() / p.lambda;
    const auto all = dense_eigenvalues(full).values;
    const SpectrumExport one = jump_spectrum(g, p);
    std::vector<std::complex<double>> repeated;
    for (std::size_t j = 0; j < g.nv(); ++j) repeated.insert(repeated.end(), one.values.begin(), one.values.end());
    CHECK(oracle::multiset_distance(all, repeated) <= 1e-8);
}

TEST_CASE("jump intensity does not change the spectrum of J") {
    BatesParams p = load_case("III").params;
    const SpatialGrid g = build_grid(p, {40, 20});
    const auto a = jump_spectrum(g, p).values;
    p.lambda = 0.01;
    const auto b = jump_spectrum(g, p).values;
    CHECK(a == b);
}

TEST_CASE("spectrum csv") {
    const BatesParams p = load_case("I").params;
    const SpatialGrid g = build_grid(p, {8, 4});
    std::ostringstream os;
    write_spectrum_csv(os, {jump_spectrum(g, p, "I")});
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "case,m1,m2,re,im");
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.rfind("I,8,4,", 0) == 0);
        ++rows;
    }
    CHECK(rows == 7);
}
