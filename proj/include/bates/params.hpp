#pragma once

#include <cmath>

namespace bates {

/// Bates model and European put contract.
///
/// Asset follows Heston dynamics (kappa, eta, sigma, rho) with log-normal
/// Merton jumps of intensity lambda, log-jump mean gamma and stdev delta.
struct BatesParams {
    double kappa = 0.0;
    double eta = 0.0;
    double sigma = 0.0;
    double rho = 0.0;
    double r = 0.0;
    double lambda = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double T = 0.0;
    double K = 0.0;

    /// Mean relative jump size exp(gamma + delta^2/2) - 1.
    double eps() const { return std::expm1(gamma + 0.5 * delta * delta); }

    bool feller_satisfied() const { return 2.0 * kappa * eta > sigma * sigma; }

    /// Throws ParameterError when an invariant is broken. lambda == 0 is
    /// accepted so that the no-jump degenerate model can be assembled.
    void validate() const;
};

}  // namespace bates
