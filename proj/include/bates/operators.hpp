#pragma once

#include "bates/grid.hpp"
#include "bates/params.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <span>
#include <vector>

namespace bates {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Quadrature weights for the jump integral on one v-level.
///
/// Row i-1 (i = 1..m1-1) maps samples u_0..u_m1 to the approximation of
/// int_0^inf u(s_i y) f(y) dy obtained from piecewise-linear interpolation
/// with u = 0 beyond Smax. Columns 0 and m1 touch Dirichlet nodes.
struct JumpBlock {
    Eigen::MatrixXd raw;  // (m1-1) x (m1+1)

    Eigen::Index size() const { return raw.rows(); }
    Eigen::MatrixXd interior() const { return raw.middleCols(1, raw.rows()); }
    Eigen::VectorXd left_column() const { return raw.col(0); }
    Eigen::VectorXd right_column() const { return raw.col(raw.cols() - 1); }
};

JumpBlock jump_block(const SpatialGrid& grid, const BatesParams& params);

/// Standard normal probability mass on (lo, hi); infinite ends allowed.
double normal_mass(double lo, double hi);

/// The four-way split A = A0J + A0D + A1 + A2 of the semidiscrete PIDE
/// together with the matching split of the boundary source G(t).
///
/// All vectors use the grid's j-major ordering. Every G part is a fixed
/// vector times the Dirichlet value K*exp(-r t) at s = 0; the s = Smax
/// Dirichlet value is zero and contributes nothing.
struct SplitOperators {
    std::size_t ns = 0;  // interior s-nodes (m1 - 1)
    std::size_t nv = 0;  // v-levels (m2 + 1)
    double strike = 0.0;
    double rate = 0.0;
    double lambda = 0.0;

    SparseRowMatrix a1;   // s-direction; tridiagonal
    SparseRowMatrix a2;   // v-direction; banded (1, 2) in v-major order
    SparseRowMatrix a0d;  // mixed derivative
    JumpBlock jump;                   // J, unscaled
    Eigen::MatrixXd a0j_block;        // lambda * interior(J), shared by all v-levels

    std::vector<double> g1_unit;
    std::vector<double> g2_unit;
    std::vector<double> g0d_unit;
    std::vector<double> g0j_unit;

    std::size_t size() const { return ns * nv; }

    double boundary_value(double t) const { return strike * std::exp(-rate * t); }

    /// out = A0J u + bval * g0j. Applies the dense block once per v-level.
    void apply_a0j(std::span<const double> u, double bval, std::span<double> out) const;
    void apply_a0d(std::span<const double> u, double bval, std::span<double> out) const;
    void apply_a1(std::span<const double> u, double bval, std::span<double> out) const;
    void apply_a2(std::span<const double> u, double bval, std::span<double> out) const;

    /// Full A as a dense matrix, for small-grid oracles.
    Eigen::MatrixXd dense_a0j() const;
    Eigen::MatrixXd dense_total() const;
};

SplitOperators assemble(const SpatialGrid& grid, const BatesParams& params);

/// F0J(t, u) = A0J u + G0J(t).
std::vector<double> apply_A0J(const SplitOperators& ops, std::span<const double> u, double t);

/// Permutation between the j-major ordering and the i-major ordering in
/// which A2 is banded. perm[k_imajor] = k_jmajor.
std::vector<std::size_t> v_major_permutation(std::size_t ns, std::size_t nv);

}  // namespace bates
