#include "bates/config.hpp"
#include "bates/errors.hpp"
#include "bates/harness.hpp"
#include "bates/spectrum.hpp"
#include "bates/stability.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace bates;

namespace {

struct CommonOptions {
    std::string case_name;
    std::string config;
    std::optional<std::size_t> m1, m2, n, n_ref;
    std::optional<double> theta;
    std::optional<int> adaptation;
    std::optional<std::string> family;
    std::string out;
    std::string cache_dir;
    unsigned threads = 1;
};

void add_model_flags(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--case", o.case_name, "Benchmark case I, II, III or IV");
    cmd->add_option("--config", o.config, "JSON run configuration");
    cmd->add_option("--m1", o.m1, "Grid intervals in s");
    cmd->add_option("--m2", o.m2, "Grid intervals in v");
}

void add_scheme_flags(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--theta", o.theta, "Splitting parameter");
    cmd->add_option("--adaptation", o.adaptation, "Adaptation 1, 2 or 3")->check(CLI::Range(1, 3));
    cmd->add_option("--family", o.family, "MCS or Do");
    cmd->add_option("--n", o.n, "Number of time steps");
    cmd->add_option("--n-ref", o.n_ref, "Reference solution steps");
    cmd->add_option("--cache-dir", o.cache_dir, "Reference solution cache directory");
}

RunConfig resolve(const CommonOptions& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_run_config(o.config);
    if (!o.case_name.empty()) {
        const GridSpec grid = cfg.case_config.grid;
        cfg.case_config = load_case(o.case_name);
        cfg.case_config.grid = grid;
    }
    if (o.m1) cfg.case_config.grid.m1 = *o.m1;
    if (o.m2) cfg.case_config.grid.m2 = *o.m2;
    if (o.theta) cfg.scheme.theta = *o.theta;
    if (o.adaptation) cfg.scheme.adaptation = *o.adaptation;
    if (o.family) cfg.scheme.family = family_from_string(*o.family);
    if (o.n) cfg.scheme.n_steps = *o.n;
    if (o.n_ref) cfg.n_ref = *o.n_ref;
    if (!o.out.empty()) cfg.output = o.out;
    if (!o.cache_dir.empty()) cfg.cache_dir = o.cache_dir;
    cfg.scheme.validate();
    return cfg;
}

// Writes to the configured output path, or stdout when none is set.
void emit(const std::optional<std::filesystem::path>& path, const std::string& text) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream f(*path);
    if (!f) throw ParameterError("cannot write " + path->string());
    f << text;
    std::cerr << "wrote " << path->string() << '\n';
}

std::pair<double, double> parse_point(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ParameterError("--point expects s,v");
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ParameterError("--point expects two numbers s,v, got '" + text + "'");
    }
}

int cmd_cases() {
    std::printf("%-4s %6s %6s %6s %6s %6s %7s %7s %6s %5s %6s %7s %6s\n", "case", "kappa", "eta", "sigma", "rho", "r",
                "lambda", "gamma", "delta", "T", "K", "feller", "lamT");
    for (const auto& name : case_names()) {
        const auto c = load_case(name);
        const auto& p = c.params;
        std::printf("%-4s %6g %6g %6g %6g %6g %7g %7g %6g %5g %6g %7s %6g%s\n", name.c_str(), p.kappa, p.eta, p.sigma,
                    p.rho, p.r, p.lambda, p.gamma, p.delta, p.T, p.K, p.feller_satisfied() ? "yes" : "no",
                    p.lambda * p.T, c.stiff_jumps() ? " (stiff jumps)" : "");
    }
    return 0;
}

int cmd_price(const CommonOptions& o, const std::vector<std::string>& points) {
    const RunConfig cfg = resolve(o);
    Experiment exp(cfg.case_config, cfg.n_ref, cfg.cache_dir);
    const auto& p = cfg.case_config.params;
    std::vector<std::pair<double, double>> queries;
    for (const auto& s : points) queries.push_back(parse_point(s));
    if (queries.empty()) queries.emplace_back(p.K, p.eta);
    const auto values = price(exp, cfg.scheme, queries);
    std::ostringstream os;
    os.precision(12);
    os << "s,v,value\n";
    for (std::size_t k = 0; k < queries.size(); ++k) os << queries[k].first << ',' << queries[k].second << ',' << values[k] << '\n';
    emit(cfg.output, os.str());
    return 0;
}

int cmd_sweep(const CommonOptions& o, const std::vector<std::size_t>& n_values) {
    RunConfig cfg = resolve(o);
    if (!n_values.empty()) cfg.sweep_steps = n_values;
    if (o.theta || o.adaptation || o.family) {
        cfg.sweep_schemes = {{cfg.scheme.adaptation, cfg.scheme.family, cfg.scheme.theta}};
    }
    Experiment exp(cfg.case_config, cfg.n_ref, cfg.cache_dir);
    const auto rows = sweep(exp, cfg.sweep_schemes, cfg.sweep_steps, o.threads);
    std::ostringstream os;
    write_sweep_csv(os, rows);
    emit(cfg.output, os.str());
    return 0;
}

int cmd_eigenvalues(const CommonOptions& o) {
    const RunConfig cfg = resolve(o);
    std::vector<std::string> names;
    if (o.case_name.empty() && o.config.empty())
        names = case_names();
    else
        names = {cfg.case_config.name};
    std::vector<SpectrumExport> spectra;
    for (const auto& name : names) {
        CaseConfig c = name == cfg.case_config.name ? cfg.case_config : load_case(name);
        c.grid = cfg.case_config.grid;
        const SpatialGrid g = build_grid(c.params, c.grid);
        spectra.push_back(jump_spectrum(g, c.params, name));
        std::cerr << "case " << name << ": max|nu| = " << spectra.back().max_modulus()
                  << ", max|Im nu| = " << spectra.back().max_abs_imag() << '\n';
    }
    std::ostringstream os;
    write_spectrum_csv(os, spectra);
    emit(cfg.output, os.str());
    return 0;
}

int cmd_stability(const std::vector<std::string>& theorems, const std::vector<double>& thetas, std::size_t samples,
                  std::uint64_t seed, const std::string& out, bool csv) {
    using namespace bates::stability;
    std::vector<TheoremId> ids;
    if (theorems.empty() || (theorems.size() == 1 && theorems[0] == "all")) {
        ids = {TheoremId::T1a, TheoremId::T1b, TheoremId::T2a, TheoremId::T2b_neg, TheoremId::T3a,
               TheoremId::T3b, TheoremId::L1, TheoremId::L2, TheoremId::Thm2b, TheoremId::Thm3b};
    } else {
        for (const auto& t : theorems) ids.push_back(theorem_from_string(t));
    }
    const std::vector<double> th = thetas.empty() ? std::vector<double>{1.0 / 3.0, 0.5} : thetas;
    std::ostringstream os;
    if (csv) os << VerificationReport::csv_header() << '\n';
    bool all_passed = true;
    for (TheoremId id : ids)
        for (double theta : th) {
            const auto rep = verify_theorem(id, theta, samples, seed);
            all_passed = all_passed && rep.passed;
            if (csv)
                os << rep.to_csv_row() << '\n';
            else
                os << rep.to_text() << '\n';
        }
    emit(out.empty() ? std::nullopt : std::optional<std::filesystem::path>(out), os.str());
    // a failed check is a result, not a usage error
    return all_passed ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bates model European put pricing with ADI time stepping"};
    app.require_subcommand(1);

    CommonOptions o;
    std::vector<std::string> points;
    std::vector<std::size_t> n_values;

    app.add_subcommand("cases", "List the benchmark parameter sets");

    auto* price_cmd = app.add_subcommand("price", "Price at query points after integrating to maturity");
    add_model_flags(price_cmd, o);
    add_scheme_flags(price_cmd, o);
    price_cmd->add_option("--point", points, "Query point s,v (repeatable; default K,eta)");
    price_cmd->add_option("--out", o.out, "Output CSV path (default stdout)");

    auto* sweep_cmd = app.add_subcommand("sweep", "Temporal error sweep against the reference solution");
    add_model_flags(sweep_cmd, o);
    add_scheme_flags(sweep_cmd, o);
    sweep_cmd->add_option("--n-values", n_values, "Step counts (default: 20 log-spaced in [10, 1000])");
    sweep_cmd->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--out", o.out, "Output CSV path (default stdout)");

    auto* eig_cmd = app.add_subcommand("eigenvalues", "Eigenvalues of the jump matrix block");
    add_model_flags(eig_cmd, o);
    eig_cmd->add_option("--out", o.out, "Output CSV path (default stdout)");

    std::vector<std::string> theorems;
    std::vector<double> thetas;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    std::string stab_out;
    bool csv = false;
    auto* stab_cmd = app.add_subcommand("stability", "Sampled verification of the stability results");
    stab_cmd->add_option("--theorem", theorems, "T1a T1b T2a T2b_neg T3a T3b L1 L2 Thm2b Thm3b, or all");
    stab_cmd->add_option("--theta", thetas, "Theta values (default 1/3 and 1/2)");
    stab_cmd->add_option("--samples", samples, "Samples per check");
    stab_cmd->add_option("--seed", seed, "Sampler seed");
    stab_cmd->add_option("--out", stab_out, "Output path (default stdout)");
    stab_cmd->add_flag("--csv", csv, "CSV instead of key = value text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.got_subcommand("cases")) return cmd_cases();
        if (*price_cmd) return cmd_price(o, points);
        if (*sweep_cmd) return cmd_sweep(o, n_values);
        if (*eig_cmd) return cmd_eigenvalues(o);
        if (*stab_cmd) return cmd_stability(theorems, thetas, samples, seed, stab_out, csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
