#include "bates/harness.hpp"

#include "bates/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace bates {

CaseConfig load_case(const std::string& name) {
    CaseConfig c;
    c.name = name;
    BatesParams& p = c.params;
    if (name == "I") {
        p = {2.0, 0.04, 0.25, -0.5, 0.03, 0.2, -0.5, 0.4, 0.5, 100.0};
    } else if (name == "II") {
        p = {2.0, 0.04, 0.4, -0.5, 0.03, 5.0, -0.005, 0.1, 0.5, 100.0};
    } else if (name == "III") {
        p = {1.5, 0.1, 0.3, -0.5, 0.05, 5.0, 0.3, 0.1, 1.0, 100.0};
    } else if (name == "IV") {
        p = {2.5, 0.05, 0.6, -0.8, 0.01, 10.0, -0.05, 0.01, 5.0, 100.0};
        if (p.feller_satisfied()) throw ParameterError("Case IV must violate the Feller condition");
    } else {
        throw ParameterError("unknown case: " + name + " (expected I, II, III or IV)");
    }
    p.validate();
    return c;
}

std::vector<std::string> case_names() { return {"I", "II", "III", "IV"}; }

std::vector<SchemeSpec> figure_schemes() {
    std::vector<SchemeSpec> out;
    for (int a = 1; a <= 3; ++a) {
        out.push_back({a, Family::MCS, 1.0 / 3.0});
        out.push_back({a, Family::MCS, 0.5});
        out.push_back({a, Family::Do, 0.5});
    }
    return out;
}

std::vector<std::size_t> log_spaced_steps(std::size_t lo, std::size_t hi, std::size_t n_points) {
    if (lo < 1 || hi < lo || n_points < 1) throw ParameterError("log_spaced_steps: bad range");
    std::vector<std::size_t> out;
    const double a = std::log(static_cast<double>(lo));
    const double b = std::log(static_cast<double>(hi));
    for (std::size_t k = 0; k < n_points; ++k) {
        const double f = n_points == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n_points - 1);
        const auto n = static_cast<std::size_t>(std::llround(std::exp(a + f * (b - a))));
        if (out.empty() || out.back() != n) out.push_back(n);
    }
    return out;
}

std::vector<std::size_t> region_of_interest(const SpatialGrid& grid, double strike) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < grid.nv(); ++j) {
        if (!(grid.v[j] > 0.0 && grid.v[j] < 1.0)) continue;
        for (std::size_t i = 1; i < grid.m1(); ++i)
            if (grid.s[i] > 0.5 * strike && grid.s[i] < 1.5 * strike) idx.push_back(grid.index(i, j));
    }
    return idx;
}

double max_error(std::span<const double> reference, std::span<const double> u, std::span<const std::size_t> roi) {
    if (reference.size() != u.size()) throw ParameterError("max_error: size mismatch");
    double e = 0.0;
    for (std::size_t k : roi) e = std::max(e, std::abs(reference[k] - u[k]));
    return e;
}

Experiment::Experiment(CaseConfig cfg, std::size_t n_ref, std::optional<std::filesystem::path> cache_dir)
    : cfg_(std::move(cfg)),
      grid_(build_grid(cfg_.params, cfg_.grid)),
      ops_(assemble(grid_, cfg_.params)),
      u0_(payoff_vector(grid_, cfg_.params)),
      roi_(region_of_interest(grid_, cfg_.params.K)),
      n_ref_(n_ref) {
    if (cache_dir) cache_.emplace(*cache_dir);
}

const std::vector<double>& Experiment::reference() {
    if (!reference_)
        reference_ = reference_solution(ops_, grid_, cfg_.params, n_ref_, cache_ ? &*cache_ : nullptr);
    return *reference_;
}

RunResult Experiment::solve(const SchemeConfig& scheme) const { return run(ops_, cfg_.params, scheme, u0_); }

double Experiment::temporal_error(const SchemeConfig& scheme) {
    const auto& ref = reference();
    return max_error(ref, solve(scheme).u, roi_);
}

std::vector<ErrorSweepRow> sweep(Experiment& exp, const std::vector<SchemeSpec>& schemes,
                                 const std::vector<std::size_t>& n_values, unsigned threads) {
    std::vector<ErrorSweepRow> rows;
    for (const auto& s : schemes)
        for (std::size_t n : n_values) rows.push_back({exp.config().name, s.adaptation, s.family, s.theta, n, 0.0});
    if (rows.empty()) return rows;

    const auto& ref = exp.reference();
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < rows.size(); k = next++) {
            try {
                ErrorSweepRow& row = rows[k];
                const SchemeConfig cfg{row.adaptation, row.family, row.theta, row.n};
                row.error = max_error(ref, exp.solve(cfg).u, exp.roi());
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned n_workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<ErrorSweepRow>& rows) {
    out << "case,adaptation,family,theta,N,error\n";
    const auto old = out.precision(17);
    for (const auto& r : rows)
        out << r.case_name << ',' << r.adaptation << ',' << to_string(r.family) << ',' << r.theta << ',' << r.n << ','
            << r.error << '\n';
    out.precision(old);
}

double interpolate(const SpatialGrid& grid, const SplitOperators& ops, std::span<const double> u, double t,
                   double s, double v) {
    if (u.size() != grid.size()) throw ParameterError("interpolate: solution has wrong size");
    if (!(s >= grid.s.front() && s <= grid.s.back() && v >= grid.v.front() && v <= grid.v.back()))
        throw ParameterError("price: query point outside the truncated domain");

    const double left_value = ops.boundary_value(t);
    auto node = [&](std::size_t i, std::size_t j) {
        if (i == 0) return left_value;
        if (i == grid.m1()) return 0.0;
        return u[grid.index(i, j)];
    };
    auto locate = [](const std::vector<double>& x, double q) {
        auto it = std::upper_bound(x.begin(), x.end(), q);
        std::size_t hi = static_cast<std::size_t>(it - x.begin());
        hi = std::clamp<std::size_t>(hi, 1, x.size() - 1);
        const std::size_t lo = hi - 1;
        return std::pair{lo, (q - x[lo]) / (x[hi] - x[lo])};
    };
    const auto [i, fs] = locate(grid.s, s);
    const auto [j, fv] = locate(grid.v, v);
    // exact node hits skip the blend so no rounding is introduced
    auto along_s = [&](std::size_t jj) {
        if (fs == 0.0) return node(i, jj);
        if (fs == 1.0) return node(i + 1, jj);
        return (1.0 - fs) * node(i, jj) + fs * node(i + 1, jj);
    };
    if (fv == 0.0) return along_s(j);
    if (fv == 1.0) return along_s(j + 1);
    return (1.0 - fv) * along_s(j) + fv * along_s(j + 1);
}

std::vector<double> price(const Experiment& exp, const SchemeConfig& scheme,
                          const std::vector<std::pair<double, double>>& queries) {
    for (const auto& [s, v] : queries)
        if (!(s >= 0.0 && s <= exp.grid().s.back() && v >= 0.0 && v <= exp.grid().v.back()))
            throw ParameterError("price: query point outside the truncated domain");
    const RunResult res = exp.solve(scheme);
    std::vector<double> out;
    out.reserve(queries.size());
    for (const auto& [s, v] : queries)
        out.push_back(interpolate(exp.grid(), exp.operators(), res.u, exp.config().params.T, s, v));
    return out;
}

}  // namespace bates
