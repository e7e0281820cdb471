#pragma once

#include "bates/params.hpp"

#include <cstddef>
#include <vector>

namespace bates {

/// Mesh construction knobs. Zero stretch means "use the default":
/// stretch_s = K/10 and stretch_v = vmax/500.
struct GridSpec {
    std::size_t m1 = 200;
    std::size_t m2 = 100;
    double smax_mult = 8.0;
    double vmax = 5.0;
    double stretch_s = 0.0;
    double stretch_v = 0.0;
};

/// Nonuniform Cartesian mesh on [0, Smax] x [0, Vmax].
///
/// Unknowns live at s-indices 1..m1-1 and v-indices 0..m2; the s = 0 and
/// s = Smax columns carry Dirichlet data.
struct SpatialGrid {
    std::vector<double> s;   // s_0 .. s_m1
    std::vector<double> v;   // v_0 .. v_m2
    std::vector<double> ds;  // ds[i] = s_i - s_{i-1}, ds[0] unused (0)
    std::vector<double> dv;  // dv[j] = v_j - v_{j-1}, dv[0] unused (0)
    std::size_t strike_index = 0;
    double stretch_s = 0.0;
    double stretch_v = 0.0;

    std::size_t m1() const { return s.size() - 1; }
    std::size_t m2() const { return v.size() - 1; }
    std::size_t ns() const { return s.size() - 2; }  // interior s-nodes
    std::size_t nv() const { return v.size(); }
    std::size_t size() const { return ns() * nv(); }

    /// Flat index of interior node (i, j), 1 <= i <= m1-1. Ordering is
    /// j-major, i-minor so that s-direction coupling is tridiagonal.
    std::size_t index(std::size_t i, std::size_t j) const { return j * ns() + (i - 1); }
};

/// s-nodes K + c*sinh(xi), v-nodes d*sinh(eta) on uniform parameter grids,
/// end points pinned exactly.
SpatialGrid build_grid(const BatesParams& params, const GridSpec& spec);

/// Put payoff on interior nodes, with the strike-nearest column replaced
/// by the exact cell average of max(K - s, 0).
std::vector<double> payoff_vector(const SpatialGrid& grid, const BatesParams& params);

/// Exact mean of max(K - s, 0) over [a, b].
double put_cell_average(double a, double b, double K);

}  // namespace bates
