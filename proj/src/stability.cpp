#include "bates/stability.hpp"

#include "bates/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bates::stability {

namespace {

cplx inverse_p(const StabilityPoint& pt, double theta) {
    const cplx p = pt.p(theta);
    if (p == cplx{}) throw PoleError("stability function evaluated at p = 0");
    return 1.0 / p;
}

bool leq(double lhs, double rhs, double slack) { return lhs <= rhs + slack * (1.0 + std::abs(rhs)); }

double sqrt_product(double a, double b) {
    // both nonpositive under the conditions; outside them the cap is void
    if (a > 0.0 || b > 0.0) return -1.0;
    return 2.0 * std::sqrt(a * b);
}

using Mat2 = std::array<cplx, 4>;  // row-major

Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 power(Mat2 base, int n) {
    Mat2 acc{1.0, 0.0, 0.0, 1.0};
    while (n > 0) {
        if (n & 1) acc = mul(acc, base);
        base = mul(base, base);
        n >>= 1;
    }
    return acc;
}

double inf_norm(const Mat2& a) {
    return std::max(std::abs(a[0]) + std::abs(a[1]), std::abs(a[2]) + std::abs(a[3]));
}

std::string format_complex(cplx c) {
    std::ostringstream os;
    os.precision(17);
    os << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
    return os.str();
}

}  // namespace

cplx eval_R(const StabilityPoint& pt, double theta) {
    const cplx ip = inverse_p(pt, theta);
    const cplx z = pt.z();
    return 1.0 + z * ip + theta * (pt.w0 + pt.z0) * z * ip * ip + (0.5 - theta) * z * z * ip * ip;
}

cplx eval_S(const StabilityPoint& pt, double theta) {
    const cplx ip = inverse_p(pt, theta);
    const cplx z = pt.z();
    const cplx inner = z * ip + theta * pt.z0 * z * ip * ip + (0.5 - theta) * (pt.z0 + pt.z1 + pt.z2) * z * ip * ip;
    return 1.0 + (1.0 + 0.5 * pt.w0) * inner;
}

TwoStepCoefficients eval_T(const StabilityPoint& pt, double theta) {
    const cplx q = eval_Q(pt.z0, pt.z1, pt.z2, theta);
    return {1.0 + (pt.z() + 0.5 * pt.w0) * q, -0.5 * pt.w0 * q};
}

cplx eval_Q(cplx z0, cplx z1, cplx z2, double theta) {
    const cplx ip = inverse_p(StabilityPoint{{}, z0, z1, z2}, theta);
    return ip + theta * z0 * ip * ip + (0.5 - theta) * (z0 + z1 + z2) * ip * ip;
}

bool cond_membership(const StabilityPoint& pt, Condition which, std::optional<UnshiftedPair> aux, double slack) {
    switch (which) {
        case Condition::cond1: {
            if (!aux) throw ParameterError("cond1 needs the unshifted pair (zt1, zt2)");
            const double a = aux->zt1.real();
            const double b = aux->zt2.real();
            if (!leq(a, 0.0, slack) || !leq(b, 0.0, slack)) return false;
            return leq(std::abs(pt.z0), sqrt_product(std::min(a, 0.0), std::min(b, 0.0)), slack);
        }
        case Condition::cond2: {
            const double half_w = 0.5 * std::abs(pt.w0);
            const double a = pt.z1.real();
            const double b = pt.z2.real();
            if (!leq(a, -half_w, slack) || !leq(b, -half_w, slack)) return false;
            return leq(std::abs(pt.z0) + std::abs(pt.w0), sqrt_product(std::min(a, 0.0), std::min(b, 0.0)), slack);
        }
        case Condition::cond3:
        case Condition::cond5: {
            const double a = pt.z1.real();
            const double b = pt.z2.real();
            if (!leq(a, 0.0, slack) || !leq(b, 0.0, slack)) return false;
            const cplx lhs = which == Condition::cond3 ? pt.w0 + pt.z0 : pt.z0;
            return leq(std::abs(lhs), sqrt_product(std::min(a, 0.0), std::min(b, 0.0)), slack);
        }
    }
    return false;
}

RootReport schur_stable(cplx t1, cplx t0, double tol) {
    RootReport rep;
    const cplx root_disc = std::sqrt(t1 * t1 + 4.0 * t0);
    // pick the sign that avoids cancellation, then use the product of roots
    const cplx q = std::real(std::conj(t1) * root_disc) >= 0.0 ? 0.5 * (t1 + root_disc) : 0.5 * (t1 - root_disc);
    if (q == cplx{}) {
        rep.root1 = rep.root2 = 0.0;
    } else {
        rep.root1 = q;
        rep.root2 = -t0 / q;
    }
    const double a1 = std::abs(rep.root1);
    const double a2 = std::abs(rep.root2);
    rep.max_modulus = std::max(a1, a2);
    rep.in_closed_disk = rep.max_modulus <= 1.0 + tol;

    const double near_unit = std::sqrt(tol);
    const bool on_circle = std::abs(rep.max_modulus - 1.0) <= near_unit;
    const bool coincide = std::abs(rep.root1 - rep.root2) <= near_unit;
    rep.unit_roots_simple = !(on_circle && coincide && std::abs(a1 - a2) <= near_unit);
    rep.stable = rep.in_closed_disk && rep.unit_roots_simple;

    if (t1.imag() == 0.0 && t0.imag() == 0.0) {
        const double r1 = t1.real();
        const double r0 = t0.real();
        rep.schur_real = std::abs(r0) <= 1.0 + tol && r0 + std::abs(r1) <= 1.0 + tol;
    }
    return rep;
}

double ConditionSampler::fraction() {
    if (coin(0.25)) return 1.0;
    return uniform(0.0, 1.0);
}

cplx ConditionSampler::unit_phase() { return std::polar(1.0, uniform(-std::numbers::pi, std::numbers::pi)); }

StabilityPoint ConditionSampler::cond2(bool complex_values, bool nonnegative_w0) {
    StabilityPoint pt;
    const double a = -log_uniform(-3.0, 3.0);
    const double b = -log_uniform(-3.0, 3.0);
    pt.z1 = complex_values ? cplx(a, uniform(-3.0, 3.0) * -a) : cplx(a, 0.0);
    pt.z2 = complex_values ? cplx(b, uniform(-3.0, 3.0) * -b) : cplx(b, 0.0);

    const double cap = 2.0 * std::sqrt(a * b);
    const double total = fraction() * cap;
    const double share = coin(0.1) ? 0.0 : (coin(0.1) ? 1.0 : uniform(0.0, 1.0));
    const double w_abs = std::min(share * total, 2.0 * std::min(-a, -b));
    const double z0_abs = total - w_abs;

    if (complex_values) {
        pt.w0 = w_abs * (nonnegative_w0 ? 1.0 : unit_phase());
        pt.z0 = z0_abs * unit_phase();
    } else {
        pt.w0 = nonnegative_w0 || coin(0.5) ? w_abs : -w_abs;
        pt.z0 = coin(0.5) ? z0_abs : -z0_abs;
    }
    return pt;
}

StabilityPoint ConditionSampler::cond1(bool complex_values) { return cond5(complex_values); }

StabilityPoint ConditionSampler::cond5(bool complex_values) {
    StabilityPoint pt;
    const double a = -log_uniform(-3.0, 3.0);
    const double b = -log_uniform(-3.0, 3.0);
    pt.z1 = complex_values ? cplx(a, uniform(-3.0, 3.0) * -a) : cplx(a, 0.0);
    pt.z2 = complex_values ? cplx(b, uniform(-3.0, 3.0) * -b) : cplx(b, 0.0);
    const double z0_abs = fraction() * 2.0 * std::sqrt(a * b);
    pt.z0 = complex_values ? z0_abs * unit_phase() : cplx(coin(0.5) ? z0_abs : -z0_abs, 0.0);
    return pt;
}

std::string to_string(TheoremId id) {
    switch (id) {
        case TheoremId::T1a: return "T1a";
        case TheoremId::T1b: return "T1b";
        case TheoremId::T2a: return "T2a";
        case TheoremId::T2b_neg: return "T2b_neg";
        case TheoremId::T3a: return "T3a";
        case TheoremId::T3b: return "T3b";
        case TheoremId::L1: return "L1";
        case TheoremId::L2: return "L2";
        case TheoremId::Thm2b: return "Thm2b";
        case TheoremId::Thm3b: return "Thm3b";
    }
    return "?";
}

TheoremId theorem_from_string(const std::string& name) {
    for (TheoremId id : {TheoremId::T1a, TheoremId::T1b, TheoremId::T2a, TheoremId::T2b_neg, TheoremId::T3a,
                         TheoremId::T3b, TheoremId::L1, TheoremId::L2, TheoremId::Thm2b, TheoremId::Thm3b})
        if (to_string(id) == name) return id;
    throw ParameterError("unknown theorem id: " + name);
}

StabilityPoint theorem2_point(double x, double xi, bool negative_w0) {
    return {negative_w0 ? -x : x, 0.0, -0.5 * x - xi, -0.5 * x};
}

double theorem2_closed_form(double x, double xi, double theta) {
    const double a = 1.0 + 0.5 * theta * x + theta * xi;
    const double b = 1.0 + 0.5 * theta * x;
    return 1.0 - (1.0 + 0.5 * x) * xi / (a * b) * (1.0 - (0.5 - theta) * (x + xi) / (a * b));
}

namespace {

// Scan the Theorem 2 family over x = 10^k, xi = x^2 and return the point of
// largest |S|.
std::pair<StabilityPoint, double> scan_theorem2(double theta, bool negative_w0) {
    StabilityPoint best{};
    double best_abs = -1.0;
    for (int k = -2; k <= 8; ++k) {
        const double x = std::pow(10.0, k);
        for (double xi : {0.0, x, x * x}) {
            const StabilityPoint pt = theorem2_point(x, xi, negative_w0);
            const double val = std::abs(eval_S(pt, theta));
            if (val > best_abs) {
                best_abs = val;
                best = pt;
            }
        }
    }
    return {best, best_abs};
}

void record(VerificationReport& rep, double value, const StabilityPoint& pt, bool violated) {
    rep.max_observed = std::max(rep.max_observed, value);
    if (violated) {
        if (rep.violations == 0) rep.witness = pt;
        ++rep.violations;
    }
}

}  // namespace

VerificationReport verify_theorem(TheoremId id, double theta, std::size_t samples, std::uint64_t seed,
                                  const VerifyOptions& opts) {
    if (!(theta > 0.0)) throw ParameterError("verify_theorem: theta must be > 0");
    VerificationReport rep;
    rep.id = id;
    rep.theta = theta;
    rep.samples = samples;
    rep.seed = seed;
    ConditionSampler sampler(seed);
    const double tol = opts.tolerance;
    const double L = std::max(1.0 / theta, 2.0);

    switch (id) {
        case TheoremId::T1a:
        case TheoremId::T1b: {
            const bool complex_values = id == TheoremId::T1b;
            rep.quantity = "|R|";
            rep.bound = 1.0;
            for (std::size_t k = 0; k < samples; ++k) {
                const StabilityPoint pt = sampler.cond2(complex_values);
                const double val = std::abs(eval_R(pt, theta));
                record(rep, val, pt, val > 1.0 + tol);
            }
            rep.passed = rep.violations == 0;
            break;
        }
        case TheoremId::T2a: {
            // limit of the proof construction, then a search for |S| > 1
            rep.quantity = "S(x=1e8, xi=x^2)";
            rep.bound = 1.0 - 1.0 / (theta * theta);
            const double x = 1e8;
            const double limit_value = eval_S(theorem2_point(x, x * x, false), theta).real();
            rep.max_observed = limit_value;
            auto [pt, val] = scan_theorem2(theta, false);
            for (std::size_t k = 0; k < samples; ++k) {
                const StabilityPoint cand = sampler.cond2(false, true);
                const double v = std::abs(eval_S(cand, theta));
                if (v > val) {
                    val = v;
                    pt = cand;
                }
            }
            const bool exceeds = val > 1.0 + tol;
            if (exceeds) {
                rep.witness = pt;
                rep.violations = 1;
            }
            const bool limit_ok = std::abs(limit_value - rep.bound) <= 1e-3;
            const bool necessary = theta >= std::numbers::sqrt2 / 2.0 - 1e-15;
            rep.passed = limit_ok && (necessary || exceeds);
            std::ostringstream os;
            os << "max |S| over cond2 with w0 >= 0: " << val << "; theta >= sqrt(2)/2: " << (necessary ? "yes" : "no");
            rep.note = os.str();
            break;
        }
        case TheoremId::T2b_neg: {
            rep.quantity = "|S| on w0 = -x construction";
            rep.bound = 1.0 + 1.0 / (theta * theta);
            auto [pt, val] = scan_theorem2(theta, true);
            rep.max_observed = val;
            if (val > 1.0 + tol && cond_membership(pt, Condition::cond2, std::nullopt, tol)) {
                rep.witness = pt;
                rep.violations = 1;
            }
            rep.passed = rep.violations == 1;
            rep.note = "negative result: a cond2 point with |S| > 1 must exist for every theta";
            break;
        }
        case TheoremId::T3a: {
            rep.quantity = "max root modulus";
            rep.bound = 1.0;
            for (std::size_t k = 0; k < samples; ++k) {
                const StabilityPoint pt = sampler.cond2(false, true);
                const TwoStepCoefficients t = eval_T(pt, theta);
                const RootReport roots = schur_stable(t.t1, t.t0, tol);
                record(rep, roots.max_modulus, pt, !roots.stable);
            }
            rep.passed = rep.violations == 0;
            break;
        }
        case TheoremId::T3b: {
            const StabilityPoint pt{-2.0 / theta, 0.0, -1.0 / theta, -1.0 / theta};
            const TwoStepCoefficients t = eval_T(pt, theta);
            rep.quantity = "T0 - T1";
            rep.bound = 1.0;
            rep.max_observed = (t.t0 - t.t1).real();
            const bool violated = rep.max_observed > 1.0 + tol;
            const double threshold = (9.0 + std::sqrt(33.0)) / 16.0;
            if (violated) {
                rep.witness = pt;
                rep.violations = 1;
            }
            rep.passed = violated == (theta < threshold);
            std::ostringstream os;
            os << "theta threshold (9+sqrt(33))/16 = " << threshold
               << "; root condition: " << (schur_stable(t.t1, t.t0, tol).stable ? "holds" : "fails");
            rep.note = os.str();
            break;
        }
        case TheoremId::L1: {
            rep.quantity = "cond2 violations";
            rep.bound = 0.0;
            for (std::size_t k = 0; k < samples; ++k) {
                const StabilityPoint pre = sampler.cond1(sampler.coin(0.5));
                const double y = sampler.log_uniform(-3.0, 3.0);
                const double x = sampler.coin(0.25) ? y : sampler.uniform(0.0, 1.0) * y;
                const double nu_abs = sampler.coin(0.25) ? 1.0 : sampler.uniform(0.0, 1.0);
                const cplx nu = sampler.coin(0.5) ? cplx(sampler.coin(0.5) ? nu_abs : -nu_abs) : nu_abs * sampler.unit_phase();
                const StabilityPoint mapped{x * nu, pre.z0, pre.z1 - 0.5 * y, pre.z2 - 0.5 * y};
                const bool ok = cond_membership(mapped, Condition::cond2, std::nullopt, tol);
                record(rep, ok ? 0.0 : 1.0, mapped, !ok);
            }
            rep.max_observed = static_cast<double>(rep.violations);
            rep.passed = rep.violations == 0;
            break;
        }
        case TheoremId::L2: {
            rep.quantity = "|Q|";
            rep.bound = L;
            for (std::size_t k = 0; k < samples; ++k) {
                const StabilityPoint pt = sampler.cond5(sampler.coin(0.5));
                const double val = std::abs(eval_Q(pt.z0, pt.z1, pt.z2, theta));
                record(rep, val, pt, val > L + tol);
            }
            rep.passed = rep.violations == 0;
            break;
        }
        case TheoremId::Thm2b:
        case TheoremId::Thm3b: {
            const bool complex_values = theta >= 0.5;
            const double horizon = opts.lambda_dt * opts.n_steps;
            const bool two_step = id == TheoremId::Thm3b;
            rep.bound = two_step ? std::exp(2.0 * L * horizon) : std::exp((1.0 + L) * horizon);
            rep.quantity = two_step ? "||C^n||_inf" : "|S^n|";
            for (std::size_t k = 0; k < samples; ++k) {
                StabilityPoint pt = sampler.cond5(complex_values);
                const double w_abs = sampler.coin(0.25) ? opts.lambda_dt : sampler.uniform(0.0, opts.lambda_dt);
                pt.w0 = complex_values ? w_abs * sampler.unit_phase() : cplx(sampler.coin(0.5) ? w_abs : -w_abs);
                double val;
                if (two_step) {
                    const TwoStepCoefficients t = eval_T(pt, theta);
                    val = inf_norm(power({t.t1, t.t0, 1.0, 0.0}, opts.n_steps));
                } else {
                    val = std::pow(std::abs(eval_S(pt, theta)), opts.n_steps);
                }
                record(rep, val, pt, val > rep.bound * (1.0 + tol));
            }
            rep.passed = rep.violations == 0;
            std::ostringstream os;
            os << "|w0| <= " << opts.lambda_dt << ", n = " << opts.n_steps << ", L = " << L
               << (complex_values ? ", complex z" : ", real z");
            rep.note = os.str();
            break;
        }
    }
    return rep;
}

std::string VerificationReport::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "theorem = " << to_string(id) << '\n'
       << "theta = " << theta << '\n'
       << "samples = " << samples << '\n'
       << "seed = " << seed << '\n'
       << "quantity = " << quantity << '\n'
       << "max_observed = " << max_observed << '\n'
       << "bound = " << bound << '\n'
       << "violations = " << violations << '\n'
       << "passed = " << (passed ? "true" : "false") << '\n';
    if (witness) {
        os << "witness.w0 = " << format_complex(witness->w0) << '\n'
           << "witness.z0 = " << format_complex(witness->z0) << '\n'
           << "witness.z1 = " << format_complex(witness->z1) << '\n'
           << "witness.z2 = " << format_complex(witness->z2) << '\n';
    }
    if (!note.empty()) os << "note = " << note << '\n';
    return os.str();
}

std::string VerificationReport::csv_header() { return "theorem,theta,samples,seed,max_observed,bound,violations,passed"; }

std::string VerificationReport::to_csv_row() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(id) << ',' << theta << ',' << samples << ',' << seed << ',' << max_observed << ',' << bound << ','
       << violations << ',' << (passed ? 1 : 0);
    return os.str();
}

}  // namespace bates::stability
