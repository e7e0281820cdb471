#pragma once

#include "bates/errors.hpp"
#include "bates/grid.hpp"
#include "bates/linalg.hpp"
#include "bates/operators.hpp"
#include "bates/params.hpp"

#include <complex>
#include <concepts>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bates {

enum class Family { MCS, Do };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

/// Which adaptation, MCS or Douglas, theta, and number of steps.
/// Douglas stops each step at Y2.
struct SchemeConfig {
    int adaptation = 1;  // 1, 2 or 3
    Family family = Family::MCS;
    double theta = 1.0 / 3.0;
    std::size_t n_steps = 100;

    double dt(double maturity) const { return maturity / static_cast<double>(n_steps); }
    void validate() const;
};

/// A split linear system U' = (A0J + A0D + A1 + A2) U + G(t) as seen by the
/// ADI stepper. Direction 1 and 2 parts are implicit; solve(d, ...) applies
/// (I - theta dt A_d)^{-1} with the factors fixed at construction.
template <class S>
concept AdiSystem = requires(S& s, double t, typename S::value_type a,
                             std::span<const typename S::value_type> in, std::span<typename S::value_type> out) {
    { s.size() } -> std::convertible_to<std::size_t>;
    s.f0j(t, in, out);
    s.f0d(t, in, out);
    s.f1(t, in, out);
    s.f2(t, in, out);
    s.add_source(1, t, 1.0, out);
    s.solve(1, out);
};

namespace detail {

template <class V>
void axpy_into(std::span<V> out, std::span<const V> x, double a, std::span<const V> y) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = x[k] + a * y[k];
}

}  // namespace detail

/// Stage sequence of the three MCS adaptations and their Douglas reductions.
///
/// Arithmetic order inside each stage is fixed so that with a zero jump
/// part all three adaptations produce bit-identical results.
template <AdiSystem Sys>
class AdiStepper {
public:
    using V = typename Sys::value_type;

    AdiStepper(Sys& sys, Family family, double theta, double dt)
        : sys_(sys), family_(family), theta_(theta), dt_(dt) {
        const std::size_t m = sys.size();
        for (auto* v : {&f0j_u_, &f0d_u_, &f1_u_, &f2_u_, &full_u_, &y0_, &y1_, &y2_, &f0j_y2_, &f0d_y2_,
                        &f1_y2_, &f2_y2_, &full_y2_, &x0_jump_, &yt0_, &yt1_})
            v->assign(m, V{});
    }

    Family family() const { return family_; }
    double theta() const { return theta_; }
    double dt() const { return dt_; }

    /// Adaptation 1: jump and mixed parts together as the explicit F0.
    void step_adaptation1(std::span<const V> u, double t_prev, std::span<V> out) {
        explicit_parts(u, t_prev, true);
        sum_into(full_u_, f0j_u_, f0d_u_, f1_u_, f2_u_);
        detail::axpy_into<V>(y0_, u, dt_, full_u_);
        finish(t_prev, out, /*jump_in_corrector=*/true);
    }

    /// Adaptation 2: explicit trapezoidal jump predictor before the ADI stages.
    void step_adaptation2(std::span<const V> u, double t_prev, std::span<V> out) {
        const double t_next = t_prev + dt_;
        explicit_parts(u, t_prev, true);
        sum_into(full_u_, f0j_u_, f0d_u_, f1_u_, f2_u_);
        detail::axpy_into<V>(y0_, u, dt_, full_u_);  // X0
        sys_.f0j(t_next, y0_, x0_jump_);
        for (std::size_t k = 0; k < y0_.size(); ++k) y0_[k] = y0_[k] + 0.5 * dt_ * (x0_jump_[k] - f0j_u_[k]);
        finish(t_prev, out, false);
    }

    /// Adaptation 3: two-step Adams-Bashforth jump term. `jump_prev2` is
    /// F0J(t_{n-2}, U_{n-2}); F0J(t_{n-1}, U_{n-1}) is left in last_jump().
    void step_adaptation3(std::span<const V> u, std::span<const V> jump_prev2, double t_prev, std::span<V> out) {
        explicit_parts(u, t_prev, true);
        sum_into(full_u_, f0d_u_, f1_u_, f2_u_);
        detail::axpy_into<V>(y0_, u, dt_, full_u_);  // X0
        for (std::size_t k = 0; k < y0_.size(); ++k)
            y0_[k] = (y0_[k] + 1.5 * dt_ * f0j_u_[k]) - 0.5 * dt_ * jump_prev2[k];
        finish(t_prev, out, false);
    }

    /// F0J(t_{n-1}, U_{n-1}) from the most recent step.
    std::span<const V> last_jump() const { return f0j_u_; }

private:
    void explicit_parts(std::span<const V> u, double t, bool with_jump) {
        if (with_jump) sys_.f0j(t, u, f0j_u_);
        sys_.f0d(t, u, f0d_u_);
        sys_.f1(t, u, f1_u_);
        sys_.f2(t, u, f2_u_);
    }

    static void sum_into(std::vector<V>& out, const std::vector<V>& a, const std::vector<V>& b,
                         const std::vector<V>& c, const std::vector<V>& d) {
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = ((a[k] + b[k]) + c[k]) + d[k];
    }
    static void sum_into(std::vector<V>& out, const std::vector<V>& b, const std::vector<V>& c,
                         const std::vector<V>& d) {
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = (b[k] + c[k]) + d[k];
    }

    // Y_j = Y_{j-1} + theta dt (F_j(t_n, Y_j) - F_j(t_{n-1}, U)) for j = 1, 2.
    void implicit_sweeps(const std::vector<V>& start, double t_next, std::vector<V>& mid, std::span<V> out) {
        const double c = theta_ * dt_;
        for (std::size_t k = 0; k < mid.size(); ++k) mid[k] = start[k] - c * f1_u_[k];
        sys_.add_source(1, t_next, c, mid);
        sys_.solve(1, mid);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = mid[k] - c * f2_u_[k];
        sys_.add_source(2, t_next, c, out);
        sys_.solve(2, out);
    }

    void finish(double t_prev, std::span<V> out, bool jump_in_corrector) {
        const double t_next = t_prev + dt_;
        implicit_sweeps(y0_, t_next, y1_, y2_);
        if (family_ == Family::Do) {
            std::copy(y2_.begin(), y2_.end(), out.begin());
            return;
        }
        const double c0 = theta_ * dt_;
        const double c1 = (0.5 - theta_) * dt_;
        if (jump_in_corrector) sys_.f0j(t_next, y2_, f0j_y2_);
        sys_.f0d(t_next, y2_, f0d_y2_);
        sys_.f1(t_next, y2_, f1_y2_);
        sys_.f2(t_next, y2_, f2_y2_);
        if (jump_in_corrector) {
            // F0 = F0J + F0D, F = F0 + F1 + F2
            sum_into(full_y2_, f0j_y2_, f0d_y2_, f1_y2_, f2_y2_);
            for (std::size_t k = 0; k < yt0_.size(); ++k) {
                const V f0_new = f0j_y2_[k] + f0d_y2_[k];
                const V f0_old = f0j_u_[k] + f0d_u_[k];
                yt0_[k] = (y0_[k] + c0 * (f0_new - f0_old)) + c1 * (full_y2_[k] - full_u_[k]);
            }
        } else {
            // F^(D) = F0D + F1 + F2 on both ends
            sum_into(full_y2_, f0d_y2_, f1_y2_, f2_y2_);
            for (std::size_t k = 0; k < yt0_.size(); ++k) {
                const V fd_old = (f0d_u_[k] + f1_u_[k]) + f2_u_[k];
                yt0_[k] = (y0_[k] + c0 * (f0d_y2_[k] - f0d_u_[k])) + c1 * (full_y2_[k] - fd_old);
            }
        }
        implicit_sweeps(yt0_, t_next, yt1_, out);
    }

    Sys& sys_;
    Family family_;
    double theta_;
    double dt_;
    std::vector<V> f0j_u_, f0d_u_, f1_u_, f2_u_, full_u_;
    std::vector<V> y0_, y1_, y2_;
    std::vector<V> f0j_y2_, f0d_y2_, f1_y2_, f2_y2_, full_y2_;
    std::vector<V> x0_jump_, yt0_, yt1_;
};

/// Per-run instrumentation.
struct RunDiagnostics {
    std::vector<std::size_t> jump_evals_per_step;  // dense A0J applications per step
    std::size_t factorizations = 0;
};

/// Drives an AdiStepper for n steps from t = 0. Adaptation 3 starts with
/// one adaptation-1 step of the same family. `jump_counter` reads the
/// system's cumulative count of jump evaluations, for diagnostics.
template <AdiSystem Sys, class Counter>
std::vector<typename Sys::value_type> integrate(Sys& sys, const SchemeConfig& cfg, double dt,
                                                std::span<const typename Sys::value_type> u0,
                                                RunDiagnostics* diag, Counter jump_counter) {
    using V = typename Sys::value_type;
    cfg.validate();
    if (u0.size() != sys.size()) throw ParameterError("integrate: initial vector has wrong size");
    AdiStepper<Sys> stepper(sys, cfg.family, cfg.theta, dt);
    std::vector<V> u(u0.begin(), u0.end());
    std::vector<V> next(u.size());
    std::vector<V> lagged_jump(u.size());
    for (std::size_t n = 1; n <= cfg.n_steps; ++n) {
        const double t_prev = static_cast<double>(n - 1) * dt;
        const std::size_t before = jump_counter();
        switch (cfg.adaptation) {
            case 1: stepper.step_adaptation1(u, t_prev, next); break;
            case 2: stepper.step_adaptation2(u, t_prev, next); break;
            default:
                if (n == 1)
                    stepper.step_adaptation1(u, t_prev, next);
                else
                    stepper.step_adaptation3(u, lagged_jump, t_prev, next);
                {
                    const auto lj = stepper.last_jump();
                    std::copy(lj.begin(), lj.end(), lagged_jump.begin());
                }
                break;
        }
        if (diag) diag->jump_evals_per_step.push_back(jump_counter() - before);
        u.swap(next);
    }
    return u;
}

/// The semidiscrete Bates PIDE as an AdiSystem. Factors I - theta dt A1
/// (tridiagonal) and I - theta dt A2 (banded after reordering) once.
class PideSystem {
public:
    using value_type = double;

    PideSystem(const SplitOperators& ops, double theta_dt);

    std::size_t size() const { return ops_.size(); }

    void f0j(double t, std::span<const double> in, std::span<double> out);
    void f0d(double t, std::span<const double> in, std::span<double> out);
    void f1(double t, std::span<const double> in, std::span<double> out);
    void f2(double t, std::span<const double> in, std::span<double> out);
    void add_source(int dir, double t, double scale, std::span<double> out) const;
    void solve(int dir, std::span<double> inout);

    std::size_t jump_evaluations() const { return jump_evals_; }
    std::size_t factorizations() const { return 2; }

private:
    const SplitOperators& ops_;
    BandedLU lu1_;
    BandedLU lu2_;
    std::vector<std::size_t> perm_;
    std::vector<double> scratch_;
    std::size_t jump_evals_ = 0;
};

/// I - theta_dt * A_dir as a banded matrix in the ordering where it is banded.
BandedMatrix implicit_matrix(const SplitOperators& ops, int dir, double theta_dt);

/// 1x1 system U' = (lambda0 + mu0 + mu1 + mu2) U, no source term.
template <class V>
class ScalarSystem {
public:
    using value_type = V;

    ScalarSystem(V lambda0, V mu0, V mu1, V mu2, double theta_dt)
        : l0_(lambda0), m0_(mu0), m1_(mu1), m2_(mu2), theta_dt_(theta_dt) {}

    std::size_t size() const { return 1; }
    void f0j(double, std::span<const V> in, std::span<V> out) {
        out[0] = l0_ * in[0];
        ++jump_evals_;
    }
    void f0d(double, std::span<const V> in, std::span<V> out) { out[0] = m0_ * in[0]; }
    void f1(double, std::span<const V> in, std::span<V> out) { out[0] = m1_ * in[0]; }
    void f2(double, std::span<const V> in, std::span<V> out) { out[0] = m2_ * in[0]; }
    void add_source(int, double, double, std::span<V>) const {}
    void solve(int dir, std::span<V> inout) const {
        inout[0] = inout[0] / (1.0 - theta_dt_ * (dir == 1 ? m1_ : m2_));
    }
    std::size_t jump_evaluations() const { return jump_evals_; }

private:
    V l0_, m0_, m1_, m2_;
    double theta_dt_;
    std::size_t jump_evals_ = 0;
};

struct RunResult {
    std::vector<double> u;
    RunDiagnostics diagnostics;
};

/// Integrates the PIDE from u0 to t = T with the configured scheme.
RunResult run(const SplitOperators& ops, const BatesParams& params, const SchemeConfig& cfg,
              std::span<const double> u0);

/// Disk cache for reference solutions. One file per key; see README for
/// the layout.
class ReferenceCache {
public:
    explicit ReferenceCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    static std::string key(const BatesParams& params, const SpatialGrid& grid, std::size_t n_ref);

    std::optional<std::vector<double>> load(const std::string& key, std::size_t expected_size) const;
    void store(const std::string& key, std::span<const double> u) const;
    std::filesystem::path path_for(const std::string& key) const;

private:
    std::filesystem::path dir_;
};

inline constexpr std::size_t kDefaultReferenceSteps = 10000;

/// Fine-step MCS adaptation 1, theta = 1/3, from the cell-averaged payoff.
std::vector<double> reference_solution(const SplitOperators& ops, const SpatialGrid& grid,
                                       const BatesParams& params, std::size_t n_ref = kDefaultReferenceSteps,
                                       const ReferenceCache* cache = nullptr);

}  // namespace bates
