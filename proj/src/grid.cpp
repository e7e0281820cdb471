#include "bates/grid.hpp"

#include "bates/errors.hpp"

#include <cmath>

namespace bates {

namespace {

std::vector<double> widths(const std::vector<double>& x) {
    std::vector<double> w(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i) w[i] = x[i] - x[i - 1];
    return w;
}

}  // namespace

SpatialGrid build_grid(const BatesParams& params, const GridSpec& spec) {
    params.validate();
    if (spec.m1 < 4) throw ParameterError("build_grid: m1 must be >= 4");
    if (spec.m2 < 3) throw ParameterError("build_grid: m2 must be >= 3");
    if (!(spec.smax_mult > 1.0)) throw ParameterError("build_grid: smax_mult must be > 1");
    if (!(spec.vmax > 0.0)) throw ParameterError("build_grid: vmax must be > 0");
    if (spec.stretch_s < 0.0 || spec.stretch_v < 0.0)
        throw ParameterError("build_grid: stretch parameters must be > 0");

    const double K = params.K;
    const double smax = spec.smax_mult * K;
    const double c = spec.stretch_s > 0.0 ? spec.stretch_s : K / 10.0;
    const double d = spec.stretch_v > 0.0 ? spec.stretch_v : spec.vmax / 500.0;

    SpatialGrid g;
    g.stretch_s = c;
    g.stretch_v = d;

    const std::size_t m1 = spec.m1;
    g.s.resize(m1 + 1);
    const double xi_lo = std::asinh(-K / c);
    const double xi_hi = std::asinh((smax - K) / c);
    const double dxi = (xi_hi - xi_lo) / static_cast<double>(m1);
    for (std::size_t i = 0; i <= m1; ++i) {
        const double xi = xi_lo + static_cast<double>(i) * dxi;
        g.s[i] = K + c * std::sinh(xi);
    }
    g.s.front() = 0.0;
    g.s.back() = smax;

    const std::size_t m2 = spec.m2;
    g.v.resize(m2 + 1);
    const double eta_hi = std::asinh(spec.vmax / d);
    const double deta = eta_hi / static_cast<double>(m2);
    for (std::size_t j = 0; j <= m2; ++j) g.v[j] = d * std::sinh(static_cast<double>(j) * deta);
    g.v.front() = 0.0;
    g.v.back() = spec.vmax;

    g.ds = widths(g.s);
    g.dv = widths(g.v);

    // ties break toward the lower index
    std::size_t best = 0;
    for (std::size_t i = 1; i <= m1; ++i)
        if (std::abs(g.s[i] - K) < std::abs(g.s[best] - K)) best = i;
    if (best == 0) best = 1;
    if (best == m1) best = m1 - 1;
    g.strike_index = best;
    return g;
}

double put_cell_average(double a, double b, double K) {
    if (!(b > a)) throw ParameterError("put_cell_average: empty cell");
    double integral;
    if (K <= a) {
        integral = 0.0;
    } else if (K >= b) {
        integral = (K - 0.5 * (a + b)) * (b - a);
    } else {
        integral = 0.5 * (K - a) * (K - a);
    }
    return integral / (b - a);
}

std::vector<double> payoff_vector(const SpatialGrid& grid, const BatesParams& params) {
    const double K = params.K;
    const std::size_t ns = grid.ns();
    std::vector<double> slice(ns);
    for (std::size_t i = 1; i <= ns; ++i) slice[i - 1] = std::max(K - grid.s[i], 0.0);

    const std::size_t k = grid.strike_index;
    const double lo = 0.5 * (grid.s[k - 1] + grid.s[k]);
    const double hi = 0.5 * (grid.s[k] + grid.s[k + 1]);
    slice[k - 1] = put_cell_average(lo, hi, K);

    std::vector<double> u(grid.size());
    for (std::size_t j = 0; j < grid.nv(); ++j)
        for (std::size_t i = 0; i < ns; ++i) u[j * ns + i] = slice[i];
    return u;
}

}  // namespace bates
