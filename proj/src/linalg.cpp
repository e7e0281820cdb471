#include "bates/linalg.hpp"

#include "bates/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace bates {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper)
    : n_(n), kl_(lower), ku_(upper), ld_(2 * lower + upper + 1), ab_(ld_ * n, 0.0) {
    if (n == 0) throw ParameterError("BandedMatrix: empty matrix");
}

double BandedMatrix::operator()(std::size_t r, std::size_t c) const {
    if (r >= n_ || c >= n_) throw ParameterError("BandedMatrix: index out of range");
    return in_band(r, c) ? slot(r, c) : 0.0;
}

double& BandedMatrix::at(std::size_t r, std::size_t c) {
    if (r >= n_ || c >= n_ || !in_band(r, c)) throw ParameterError("BandedMatrix: entry outside band");
    return slot(r, c);
}

Eigen::MatrixXd BandedMatrix::to_dense() const {
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t c = 0; c < n_; ++c) {
        const std::size_t r0 = c > ku_ ? c - ku_ : 0;
        const std::size_t r1 = std::min(n_ - 1, c + kl_);
        for (std::size_t r = r0; r <= r1; ++r)
            d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = slot(r, c);
    }
    return d;
}

BandedMatrix BandedMatrix::from_sparse(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a,
                                       std::size_t lower, std::size_t upper,
                                       std::span<const std::size_t> perm) {
    const auto n = static_cast<std::size_t>(a.rows());
    if (a.cols() != a.rows()) throw ParameterError("BandedMatrix::from_sparse: not square");
    if (!perm.empty() && perm.size() != n) throw ParameterError("BandedMatrix::from_sparse: bad permutation");

    std::vector<std::size_t> inverse(n);
    for (std::size_t k = 0; k < n; ++k) inverse[perm.empty() ? k : perm[k]] = k;

    BandedMatrix b(n, lower, upper);
    for (Eigen::Index row = 0; row < a.outerSize(); ++row) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a, row); it; ++it) {
            const std::size_t r = inverse[static_cast<std::size_t>(it.row())];
            const std::size_t c = inverse[static_cast<std::size_t>(it.col())];
            b.at(r, c) += it.value();
        }
    }
    return b;
}

BandedLU::BandedLU(BandedMatrix m) : m_(std::move(m)), pivots_(m_.n_) {
    const std::size_t n = m_.n_;
    const std::size_t kl = m_.kl_;
    std::size_t ju = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t km = std::min(kl, n - 1 - j);
        std::size_t jp = 0;
        double best = std::abs(m_.slot(j, j));
        for (std::size_t t = 1; t <= km; ++t) {
            const double cand = std::abs(m_.slot(j + t, j));
            if (cand > best) {
                best = cand;
                jp = t;
            }
        }
        pivots_[j] = j + jp;
        if (best == 0.0) throw FactorizationError(j + 1);

        ju = std::max(ju, std::min(j + m_.ku_ + jp, n - 1));
        if (jp != 0)
            for (std::size_t c = j; c <= ju; ++c) std::swap(m_.slot(j, c), m_.slot(j + jp, c));

        const double inv = 1.0 / m_.slot(j, j);
        for (std::size_t t = 1; t <= km; ++t) m_.slot(j + t, j) *= inv;
        for (std::size_t c = j + 1; c <= ju; ++c) {
            const double ujc = m_.slot(j, c);
            if (ujc == 0.0) continue;
            for (std::size_t t = 1; t <= km; ++t) m_.slot(j + t, c) -= m_.slot(j + t, j) * ujc;
        }
    }
}

void BandedLU::solve_in_place(std::span<double> b) const {
    const std::size_t n = m_.n_;
    if (b.size() != n) throw ParameterError("solve_banded: dimension mismatch");
    const std::size_t kl = m_.kl_;
    const std::size_t kv = m_.kl_ + m_.ku_;

    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t p = pivots_[j];
        if (p != j) std::swap(b[j], b[p]);
        const std::size_t km = std::min(kl, n - 1 - j);
        const double bj = b[j];
        for (std::size_t t = 1; t <= km; ++t) b[j + t] -= m_.slot(j + t, j) * bj;
    }
    for (std::size_t jj = n; jj-- > 0;) {
        b[jj] /= m_.slot(jj, jj);
        const double bj = b[jj];
        const std::size_t i0 = jj > kv ? jj - kv : 0;
        for (std::size_t i = i0; i < jj; ++i) b[i] -= m_.slot(i, jj) * bj;
    }
}

BandedLU factor_banded(const BandedMatrix& m) { return BandedLU(m); }

std::vector<double> solve_banded(const BandedLU& lu, std::span<const double> rhs) {
    if (rhs.size() != lu.size()) throw ParameterError("solve_banded: dimension mismatch");
    std::vector<double> x(rhs.begin(), rhs.end());
    lu.solve_in_place(x);
    return x;
}

SpectrumResult dense_eigenvalues(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw ParameterError("dense_eigenvalues: matrix not square");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("dense_eigenvalues: Hessenberg QR did not converge");
    SpectrumResult out;
    out.values.reserve(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index k = 0; k < m.rows(); ++k) out.values.push_back(solver.eigenvalues()(k));
    return out;
}

}  // namespace bates
