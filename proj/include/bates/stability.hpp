#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace bates::stability {

using cplx = std::complex<double>;

/// Scaled eigenvalues of the split operators for the scalar test equation:
/// w0 for the jump part, z0 for the mixed derivative, z1 and z2 for the
/// two directional parts.
struct StabilityPoint {
    cplx w0{}, z0{}, z1{}, z2{};

    cplx z() const { return w0 + z0 + z1 + z2; }
    cplx p(double theta) const { return (1.0 - theta * z1) * (1.0 - theta * z2); }
};

/// Amplification factor of adaptation 1 (one step).
cplx eval_R(const StabilityPoint& pt, double theta);
/// Amplification factor of adaptation 2 (one step).
cplx eval_S(const StabilityPoint& pt, double theta);

/// Two-step recurrence U_n = t1 U_{n-1} + t0 U_{n-2} of adaptation 3.
struct TwoStepCoefficients {
    cplx t1{}, t0{};
};
TwoStepCoefficients eval_T(const StabilityPoint& pt, double theta);

/// Common factor 1/p + theta z0/p^2 + (1/2 - theta)(z0+z1+z2)/p^2.
cplx eval_Q(cplx z0, cplx z1, cplx z2, double theta);

enum class Condition { cond1, cond2, cond3, cond5 };

/// Directional eigenvalues before the -(r+lambda)dt/2 shift; needed by cond1.
struct UnshiftedPair {
    cplx zt1{}, zt2{};
};

/// Predicate for the eigenvalue-domain conditions. `slack` relaxes every
/// inequality to lhs <= rhs + slack * (1 + |rhs|); zero means exact.
bool cond_membership(const StabilityPoint& pt, Condition which,
                     std::optional<UnshiftedPair> aux = std::nullopt, double slack = 0.0);

struct RootReport {
    cplx root1{}, root2{};
    double max_modulus = 0.0;
    bool in_closed_disk = false;
    bool unit_roots_simple = false;
    bool stable = false;
    /// |t0| <= 1 and t0 + |t1| <= 1; set only for real coefficients.
    std::optional<bool> schur_real;
};

/// Root condition for zeta^2 - t1 zeta - t0. Moduli up to 1 + tol count
/// as inside the disk.
RootReport schur_stable(cplx t1, cplx t0, double tol = 1e-12);

/// Samplers over the condition sets. Real parts of z1, z2 are negative and
/// log-uniform in magnitude over [1e-3, 1e3]; complex variants draw
/// |Im z_j| <= 3 |Re z_j|. A quarter of draws sit on a boundary equality.
class ConditionSampler {
public:
    explicit ConditionSampler(std::uint64_t seed) : rng_(seed) {}

    StabilityPoint cond2(bool complex_values, bool nonnegative_w0 = false);
    /// w0 = 0; z0 within the cond5 cap.
    StabilityPoint cond5(bool complex_values);
    /// Returns (z0, zt1, zt2) satisfying cond1, packaged as a point with
    /// z1 = zt1, z2 = zt2 and w0 = 0.
    StabilityPoint cond1(bool complex_values);

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo_exp, double hi_exp) { return std::pow(10.0, uniform(lo_exp, hi_exp)); }
    cplx unit_phase();
    bool coin(double p_true) { return uniform(0.0, 1.0) < p_true; }

private:
    double fraction();
    std::mt19937_64 rng_;
};

enum class TheoremId { T1a, T1b, T2a, T2b_neg, T3a, T3b, L1, L2, Thm2b, Thm3b };

std::string to_string(TheoremId id);
TheoremId theorem_from_string(const std::string& name);

struct VerifyOptions {
    double lambda_dt = 0.01;   // bound on |w0| for Thm2b / Thm3b
    int n_steps = 500;         // power n for Thm2b / Thm3b
    double tolerance = 1e-12;
};

struct VerificationReport {
    TheoremId id{};
    double theta = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    bool passed = false;
    /// Largest observed value of the checked quantity (|R|, |S|, |Q|,
    /// root modulus, ||C^n||, ...), see `quantity`.
    double max_observed = 0.0;
    double bound = 0.0;
    std::size_t violations = 0;
    std::string quantity;
    std::optional<StabilityPoint> witness;
    std::string note;

    /// key = value lines.
    std::string to_text() const;
    static std::string csv_header();
    std::string to_csv_row() const;
};

VerificationReport verify_theorem(TheoremId id, double theta, std::size_t samples, std::uint64_t seed,
                                  const VerifyOptions& opts = {});

/// S on the Theorem 2 construction w0 = +-x, z0 = 0, z1 = -x/2 - xi,
/// z2 = -x/2, evaluated two ways: the generic formula and the
/// closed form of the proof (the latter for w0 = +x only).
StabilityPoint theorem2_point(double x, double xi, bool negative_w0);
double theorem2_closed_form(double x, double xi, double theta);

}  // namespace bates::stability
