#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bates {

/// Square banded matrix in LAPACK general-band layout, with kl extra rows
/// reserved for fill-in from partial pivoting.
class BandedMatrix {
public:
    BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper);

    std::size_t size() const { return n_; }
    std::size_t lower() const { return kl_; }
    std::size_t upper() const { return ku_; }

    /// True when (r, c) lies inside the declared band.
    bool in_band(std::size_t r, std::size_t c) const { return r <= c + kl_ && c <= r + ku_; }

    double operator()(std::size_t r, std::size_t c) const;
    /// Writable entry; (r, c) must be inside the declared band.
    double& at(std::size_t r, std::size_t c);

    Eigen::MatrixXd to_dense() const;

    /// Band of a sparse matrix after the symmetric permutation
    /// B(a, b) = A(perm[a], perm[b]). Entries outside the band throw.
    static BandedMatrix from_sparse(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a,
                                    std::size_t lower, std::size_t upper,
                                    std::span<const std::size_t> perm = {});

private:
    friend class BandedLU;
    double& slot(std::size_t r, std::size_t c) { return ab_[(kl_ + ku_ + r - c) + c * ld_]; }
    double slot(std::size_t r, std::size_t c) const { return ab_[(kl_ + ku_ + r - c) + c * ld_]; }

    std::size_t n_, kl_, ku_, ld_;
    std::vector<double> ab_;
};

/// LU factors of a banded matrix with partial pivoting (row interchanges
/// limited to the lower band). Factor once, solve many times.
class BandedLU {
public:
    /// Throws FactorizationError with the 1-based index of a zero pivot.
    explicit BandedLU(BandedMatrix m);

    std::size_t size() const { return m_.n_; }

    /// In-place solve; rhs.size() must equal size().
    void solve_in_place(std::span<double> rhs) const;

private:
    BandedMatrix m_;
    std::vector<std::size_t> pivots_;
};

BandedLU factor_banded(const BandedMatrix& m);
std::vector<double> solve_banded(const BandedLU& lu, std::span<const double> rhs);

struct SpectrumResult {
    std::vector<std::complex<double>> values;
};

/// All eigenvalues of a real dense matrix (Hessenberg reduction + shifted
/// QR). Throws ConvergenceError when the iteration cap is hit.
SpectrumResult dense_eigenvalues(const Eigen::MatrixXd& m);

}  // namespace bates
