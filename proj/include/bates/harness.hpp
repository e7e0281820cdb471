#pragma once

#include "bates/grid.hpp"
#include "bates/operators.hpp"
#include "bates/params.hpp"
#include "bates/schemes.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace bates {

/// A named benchmark case (or a user model) together with its grid.
struct CaseConfig {
    std::string name;
    BatesParams params;
    GridSpec grid;

    /// lambda * T above 10.
    bool stiff_jumps() const { return params.lambda * params.T > 10.0; }
};

/// Cases I-IV. Case IV is checked to violate the Feller condition.
CaseConfig load_case(const std::string& name);
std::vector<std::string> case_names();

/// Scheme without a step count.
struct SchemeSpec {
    int adaptation = 1;
    Family family = Family::MCS;
    double theta = 1.0 / 3.0;

    SchemeConfig with_steps(std::size_t n) const { return {adaptation, family, theta, n}; }
};

/// MCS theta = 1/3, MCS theta = 1/2 and Do theta = 1/2 for each adaptation.
std::vector<SchemeSpec> figure_schemes();

/// n_points integers log-spaced in [lo, hi], duplicates removed.
std::vector<std::size_t> log_spaced_steps(std::size_t lo = 10, std::size_t hi = 1000, std::size_t n_points = 20);

/// Flat indices of nodes with K/2 < s < 3K/2 and 0 < v < 1.
std::vector<std::size_t> region_of_interest(const SpatialGrid& grid, double strike);

/// Max-norm difference over the index set.
double max_error(std::span<const double> reference, std::span<const double> u, std::span<const std::size_t> roi);

/// Grid, operators and (lazily) the reference solution for one case.
class Experiment {
public:
    Experiment(CaseConfig cfg, std::size_t n_ref = kDefaultReferenceSteps,
               std::optional<std::filesystem::path> cache_dir = std::nullopt);

    const CaseConfig& config() const { return cfg_; }
    const SpatialGrid& grid() const { return grid_; }
    const SplitOperators& operators() const { return ops_; }
    const std::vector<double>& initial() const { return u0_; }
    const std::vector<std::size_t>& roi() const { return roi_; }
    std::size_t n_ref() const { return n_ref_; }

    const std::vector<double>& reference();
    RunResult solve(const SchemeConfig& scheme) const;
    double temporal_error(const SchemeConfig& scheme);

private:
    CaseConfig cfg_;
    SpatialGrid grid_;
    SplitOperators ops_;
    std::vector<double> u0_;
    std::vector<std::size_t> roi_;
    std::size_t n_ref_;
    std::optional<ReferenceCache> cache_;
    std::optional<std::vector<double>> reference_;
};

struct ErrorSweepRow {
    std::string case_name;
    int adaptation = 1;
    Family family = Family::MCS;
    double theta = 0.0;
    std::size_t n = 0;
    double error = 0.0;
};

/// Runs every (scheme, N) pair. Rows come back in scheme-major, N-minor
/// order regardless of `threads`.
std::vector<ErrorSweepRow> sweep(Experiment& exp, const std::vector<SchemeSpec>& schemes,
                                 const std::vector<std::size_t>& n_values, unsigned threads = 1);

/// CSV with header `case,adaptation,family,theta,N,error`.
void write_sweep_csv(std::ostream& out, const std::vector<ErrorSweepRow>& rows);

/// Bilinear interpolation of a solution vector on the full nodal grid,
/// using the Dirichlet data at s = 0 and s = Smax at time t.
double interpolate(const SpatialGrid& grid, const SplitOperators& ops, std::span<const double> u, double t,
                   double s, double v);

/// Prices at the query points after integrating to T with `scheme`.
std::vector<double> price(const Experiment& exp, const SchemeConfig& scheme,
                          const std::vector<std::pair<double, double>>& queries);

}  // namespace bates
