#include "bates/operators.hpp"

#include "bates/errors.hpp"
#include "bates/stencils.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bates {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

using Triplet = Eigen::Triplet<double>;

void check_span(std::size_t got, std::size_t want, const char* who) {
    if (got != want) throw ParameterError(std::string(who) + ": dimension mismatch");
}

void spmv(const SparseRowMatrix& a, std::span<const double> u, std::span<double> out) {
    Eigen::Map<const Eigen::VectorXd> x(u.data(), static_cast<Eigen::Index>(u.size()));
    Eigen::Map<Eigen::VectorXd> y(out.data(), static_cast<Eigen::Index>(out.size()));
    y.noalias() = a * x;
}

void add_source(std::span<double> out, double bval, const std::vector<double>& unit) {
    if (bval == 0.0) return;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += bval * unit[k];
}

}  // namespace

double normal_mass(double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    // erfc keeps relative accuracy in whichever tail both ends sit in
    if (lo >= 0.0) return 0.5 * (std::erfc(lo * kInvSqrt2) - std::erfc(hi * kInvSqrt2));
    if (hi <= 0.0) return 0.5 * (std::erfc(-hi * kInvSqrt2) - std::erfc(-lo * kInvSqrt2));
    return 1.0 - 0.5 * (std::erfc(-lo * kInvSqrt2) + std::erfc(hi * kInvSqrt2));
}

JumpBlock jump_block(const SpatialGrid& grid, const BatesParams& params) {
    const std::size_t m1 = grid.m1();
    const double g = params.gamma;
    const double d = params.delta;
    const double first_moment = std::exp(g + 0.5 * d * d);
    const double neg_inf = -std::numeric_limits<double>::infinity();

    JumpBlock jb;
    jb.raw = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m1 - 1), static_cast<Eigen::Index>(m1 + 1));
    for (std::size_t i = 1; i < m1; ++i) {
        const double si = grid.s[i];
        const auto row = static_cast<Eigen::Index>(i - 1);
        double log_lo = neg_inf;  // log(s_0 / s_i) with s_0 = 0
        for (std::size_t k = 0; k < m1; ++k) {
            const double log_hi = std::log(grid.s[k + 1] / si);
            // mass of Y and of Y weighted by y on (s_k/s_i, s_{k+1}/s_i)
            const double m0 = normal_mass((log_lo - g) / d, (log_hi - g) / d);
            const double m1w = first_moment * normal_mass((log_lo - g - d * d) / d, (log_hi - g - d * d) / d);
            // Linear interpolation splits the interval mass m0 between the two
            // end nodes in proportion to the conditional mean of s_i Y. This is
            // the closed-form rule rearranged so that the row sum is the sum
            // of the interval masses and no weight goes negative.
            double frac_hi = 0.0;
            if (m0 > 0.0) {
                const double mean = si * m1w / m0;
                frac_hi = std::clamp((mean - grid.s[k]) / grid.ds[k + 1], 0.0, 1.0);
            }
            jb.raw(row, static_cast<Eigen::Index>(k)) += m0 * (1.0 - frac_hi);
            jb.raw(row, static_cast<Eigen::Index>(k + 1)) += m0 * frac_hi;
            log_lo = log_hi;
        }
    }
    return jb;
}

std::vector<std::size_t> v_major_permutation(std::size_t ns, std::size_t nv) {
    std::vector<std::size_t> perm(ns * nv);
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nv; ++j) perm[i * nv + j] = j * ns + i;
    return perm;
}

SplitOperators assemble(const SpatialGrid& grid, const BatesParams& params) {
    params.validate();
    const std::size_t m1 = grid.m1();
    const std::size_t m2 = grid.m2();

    SplitOperators ops;
    ops.ns = grid.ns();
    ops.nv = grid.nv();
    ops.strike = params.K;
    ops.rate = params.r;
    ops.lambda = params.lambda;

    const std::size_t m = ops.size();
    ops.g1_unit.assign(m, 0.0);
    ops.g2_unit.assign(m, 0.0);
    ops.g0d_unit.assign(m, 0.0);
    ops.g0j_unit.assign(m, 0.0);

    const double half_reaction = 0.5 * (params.r + params.lambda);
    const double s_drift = params.r - params.lambda * params.eps();

    std::vector<Triplet> t1, t2, t0;
    t1.reserve(3 * m);
    t2.reserve(3 * m + ops.ns);
    t0.reserve(9 * m);

    for (std::size_t j = 0; j <= m2; ++j) {
        const double v = grid.v[j];
        for (std::size_t i = 1; i < m1; ++i) {
            const auto row = static_cast<int>(grid.index(i, j));
            const double s = grid.s[i];

            // s-direction
            {
                const StencilWeights f = central_first(grid.ds[i], grid.ds[i + 1]);
                const StencilWeights sec = central_second(grid.ds[i], grid.ds[i + 1]);
                const double conv = s_drift * s;
                const double diff = j == 0 ? 0.0 : 0.5 * s * s * v;
                const double left = conv * f.left + diff * sec.left;
                const double center = conv * f.center + diff * sec.center - half_reaction;
                const double right = conv * f.right + diff * sec.right;
                if (i == 1)
                    ops.g1_unit[static_cast<std::size_t>(row)] += left;
                else
                    t1.emplace_back(row, static_cast<int>(grid.index(i - 1, j)), left);
                t1.emplace_back(row, row, center);
                if (i + 1 < m1) t1.emplace_back(row, static_cast<int>(grid.index(i + 1, j)), right);
            }

            // v-direction
            if (j == 0) {
                const StencilWeights f = forward_first_v0(grid.dv[1], grid.dv[2]);
                const double conv = params.kappa * params.eta;
                t2.emplace_back(row, row, conv * f.left - half_reaction);
                t2.emplace_back(row, static_cast<int>(grid.index(i, 1)), conv * f.center);
                t2.emplace_back(row, static_cast<int>(grid.index(i, 2)), conv * f.right);
            } else {
                // ghost node v_{m2+1} mirrors v_{m2-1}
                const double dl = grid.dv[j];
                const double dr = j < m2 ? grid.dv[j + 1] : grid.dv[j];
                const StencilWeights f = central_first(dl, dr);
                const StencilWeights sec = central_second(dl, dr);
                const double conv = params.kappa * (params.eta - v);
                const double diff = 0.5 * params.sigma * params.sigma * v;
                double left = conv * f.left + diff * sec.left;
                const double center = conv * f.center + diff * sec.center - half_reaction;
                const double right = conv * f.right + diff * sec.right;
                if (j == m2) left += right;
                t2.emplace_back(row, static_cast<int>(grid.index(i, j - 1)), left);
                t2.emplace_back(row, row, center);
                if (j < m2) t2.emplace_back(row, static_cast<int>(grid.index(i, j + 1)), right);
            }

            // mixed derivative: vanishes at v = 0 and under Neumann at v = Vmax
            if (j > 0 && j < m2) {
                const StencilWeights fs = central_first(grid.ds[i], grid.ds[i + 1]);
                const StencilWeights fv = central_first(grid.dv[j], grid.dv[j + 1]);
                const double coef = params.rho * params.sigma * s * v;
                const double ws[3] = {fs.left, fs.center, fs.right};
                const double wv[3] = {fv.left, fv.center, fv.right};
                for (int a = 0; a < 3; ++a) {
                    const std::size_t ii = i + static_cast<std::size_t>(a) - 1;
                    if (ii == m1) continue;
                    for (int b = 0; b < 3; ++b) {
                        const std::size_t jj = j + static_cast<std::size_t>(b) - 1;
                        const double w = coef * ws[a] * wv[b];
                        if (ii == 0)
                            ops.g0d_unit[static_cast<std::size_t>(row)] += w;
                        else
                            t0.emplace_back(row, static_cast<int>(grid.index(ii, jj)), w);
                    }
                }
            }
        }
    }

    const auto mi = static_cast<Eigen::Index>(m);
    ops.a1.resize(mi, mi);
    ops.a1.setFromTriplets(t1.begin(), t1.end());
    ops.a2.resize(mi, mi);
    ops.a2.setFromTriplets(t2.begin(), t2.end());
    ops.a0d.resize(mi, mi);
    ops.a0d.setFromTriplets(t0.begin(), t0.end());

    ops.jump = jump_block(grid, params);
    ops.a0j_block = params.lambda * ops.jump.interior();
    const Eigen::VectorXd left = ops.jump.left_column();
    for (std::size_t j = 0; j < ops.nv; ++j)
        for (std::size_t i = 0; i < ops.ns; ++i)
            ops.g0j_unit[j * ops.ns + i] = params.lambda * left(static_cast<Eigen::Index>(i));
    return ops;
}

void SplitOperators::apply_a0j(std::span<const double> u, double bval, std::span<double> out) const {
    check_span(u.size(), size(), "apply_a0j");
    check_span(out.size(), size(), "apply_a0j");
    const auto rows = static_cast<Eigen::Index>(ns);
    const auto cols = static_cast<Eigen::Index>(nv);
    Eigen::Map<const Eigen::MatrixXd> x(u.data(), rows, cols);
    Eigen::Map<Eigen::MatrixXd> y(out.data(), rows, cols);
    y.noalias() = a0j_block * x;
    add_source(out, bval, g0j_unit);
}

void SplitOperators::apply_a0d(std::span<const double> u, double bval, std::span<double> out) const {
    check_span(u.size(), size(), "apply_a0d");
    check_span(out.size(), size(), "apply_a0d");
    spmv(a0d, u, out);
    add_source(out, bval, g0d_unit);
}

void SplitOperators::apply_a1(std::span<const double> u, double bval, std::span<double> out) const {
    check_span(u.size(), size(), "apply_a1");
    check_span(out.size(), size(), "apply_a1");
    spmv(a1, u, out);
    add_source(out, bval, g1_unit);
}

void SplitOperators::apply_a2(std::span<const double> u, double bval, std::span<double> out) const {
    check_span(u.size(), size(), "apply_a2");
    check_span(out.size(), size(), "apply_a2");
    spmv(a2, u, out);
    add_source(out, bval, g2_unit);
}

Eigen::MatrixXd SplitOperators::dense_a0j() const {
    const auto m = static_cast<Eigen::Index>(size());
    const auto n = static_cast<Eigen::Index>(ns);
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(nv); ++j) full.block(j * n, j * n, n, n) = a0j_block;
    return full;
}

Eigen::MatrixXd SplitOperators::dense_total() const {
    return Eigen::MatrixXd(a1) + Eigen::MatrixXd(a2) + Eigen::MatrixXd(a0d) + dense_a0j();
}

std::vector<double> apply_A0J(const SplitOperators& ops, std::span<const double> u, double t) {
    std::vector<double> out(ops.size());
    ops.apply_a0j(u, ops.boundary_value(t), out);
    return out;
}

}  // namespace bates
