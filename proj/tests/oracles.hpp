#pragma once
// Independent reference computations used only by the tests.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Characteristic polynomial coefficients c_0..c_n of det(x I - A)
/// (monic, c_n = 1) by the Faddeev-LeVerrier recursion.
inline std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& a) {
    const Eigen::Index n = a.rows();
    std::vector<double> c(static_cast<std::size_t>(n + 1), 0.0);
    c[static_cast<std::size_t>(n)] = 1.0;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = a * m + c[static_cast<std::size_t>(n - k + 1)] * id;
        c[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
    }
    return c;
}

/// All roots of a monic polynomial (coefficients low to high) by the
/// Durand-Kerner simultaneous iteration.
inline std::vector<cplx> polynomial_roots(const std::vector<double>& coeffs) {
    const std::size_t n = coeffs.size() - 1;
    auto eval = [&](cplx x) {
        cplx acc = coeffs[n];
        for (std::size_t k = n; k-- > 0;) acc = acc * x + coeffs[k];
        return acc;
    };
    double radius = 0.0;
    for (std::size_t k = 0; k < n; ++k) radius = std::max(radius, std::abs(coeffs[k]));
    radius = 1.0 + radius;
    std::vector<cplx> z(n);
    for (std::size_t k = 0; k < n; ++k)
        z[k] = std::polar(0.5 * radius, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4);
    for (int it = 0; it < 5000; ++it) {
        double change = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            cplx denom = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) denom *= z[k] - z[j];
            const cplx step = eval(z[k]) / denom;
            z[k] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-15) break;
    }
    return z;
}

/// Greedy matching distance between two multisets of complex numbers.
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    double worst = 0.0;
    for (const cplx& x : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](cplx p, cplx q) { return std::abs(p - x) < std::abs(q - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

/// P(Y < upper) for log Y ~ N(gamma, delta^2), integrated in log space.
inline double lognormal_mass_below(double upper, double gamma, double delta) {
    using boost::math::quadrature::gauss_kronrod;
    auto density = [&](double x) {
        const double z = (x - gamma) / delta;
        return std::exp(-0.5 * z * z) / (delta * std::sqrt(2.0 * std::numbers::pi));
    };
    const double lo = gamma - 40.0 * delta;
    const double hi = std::log(upper);
    if (hi <= lo) return 0.0;
    double err = 0.0;
    return gauss_kronrod<double, 61>::integrate(density, lo, std::min(hi, gamma + 40.0 * delta), 15, 1e-13, &err);
}

/// int_{0}^{upper} y f(y) dy for the same log-normal.
inline double lognormal_first_moment_below(double upper, double gamma, double delta) {
    using boost::math::quadrature::gauss_kronrod;
    auto integrand = [&](double x) {
        const double z = (x - gamma) / delta;
        return std::exp(x) * std::exp(-0.5 * z * z) / (delta * std::sqrt(2.0 * std::numbers::pi));
    };
    const double lo = gamma - 40.0 * delta;
    const double hi = std::log(upper);
    if (hi <= lo) return 0.0;
    double err = 0.0;
    return gauss_kronrod<double, 61>::integrate(integrand, lo, std::min(hi, gamma + 40.0 * delta + delta * delta * 2.0),
                                                15, 1e-13, &err);
}

inline cplx random_complex(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng)};
}

}  // namespace oracle
