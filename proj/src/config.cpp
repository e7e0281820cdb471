#include "bates/config.hpp"

#include "bates/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace bates {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ParameterError("config: '" + where + "' must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ParameterError("config: unknown key '" + key + "' in '" + where + "'");
}

template <class T>
void read(const json& obj, const char* key, T& dst) {
    if (obj.contains(key)) dst = obj.at(key).get<T>();
}

SchemeSpec parse_scheme_spec(const json& obj, const std::string& where) {
    reject_unknown(obj, {"adaptation", "family", "theta"}, where);
    SchemeSpec s;
    read(obj, "adaptation", s.adaptation);
    if (obj.contains("family")) s.family = family_from_string(obj.at("family").get<std::string>());
    read(obj, "theta", s.theta);
    s.with_steps(1).validate();
    return s;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("config: ") + e.what());
    }
    reject_unknown(root, {"model", "grid", "scheme", "sweep", "output"}, "root");

    RunConfig cfg;
    try {
        if (root.contains("model")) {
            const json& m = root.at("model");
            reject_unknown(m, {"case", "name", "kappa", "eta", "sigma", "rho", "r", "lambda", "gamma", "delta", "T", "K"},
                           "model");
            if (m.contains("case")) cfg.case_config = load_case(m.at("case").get<std::string>());
            BatesParams& p = cfg.case_config.params;
            read(m, "kappa", p.kappa);
            read(m, "eta", p.eta);
            read(m, "sigma", p.sigma);
            read(m, "rho", p.rho);
            read(m, "r", p.r);
            read(m, "lambda", p.lambda);
            read(m, "gamma", p.gamma);
            read(m, "delta", p.delta);
            read(m, "T", p.T);
            read(m, "K", p.K);
            if (m.contains("name")) {
                cfg.case_config.name = m.at("name").get<std::string>();
            } else if (!m.contains("case") && m.size() > 0) {
                cfg.case_config.name = "custom";
            }
            p.validate();
        }
        if (root.contains("grid")) {
            const json& g = root.at("grid");
            reject_unknown(g, {"m1", "m2", "smax_mult", "vmax", "stretch_s", "stretch_v"}, "grid");
            GridSpec& gs = cfg.case_config.grid;
            read(g, "m1", gs.m1);
            read(g, "m2", gs.m2);
            read(g, "smax_mult", gs.smax_mult);
            read(g, "vmax", gs.vmax);
            read(g, "stretch_s", gs.stretch_s);
            read(g, "stretch_v", gs.stretch_v);
        }
        if (root.contains("scheme")) {
            const json& s = root.at("scheme");
            reject_unknown(s, {"adaptation", "family", "theta", "n", "n_ref"}, "scheme");
            read(s, "adaptation", cfg.scheme.adaptation);
            if (s.contains("family")) cfg.scheme.family = family_from_string(s.at("family").get<std::string>());
            read(s, "theta", cfg.scheme.theta);
            read(s, "n", cfg.scheme.n_steps);
            read(s, "n_ref", cfg.n_ref);
            cfg.scheme.validate();
        }
        if (root.contains("sweep")) {
            const json& w = root.at("sweep");
            reject_unknown(w, {"schemes", "n_values", "n_min", "n_max", "count"}, "sweep");
            if (w.contains("schemes")) {
                cfg.sweep_schemes.clear();
                for (const auto& item : w.at("schemes")) cfg.sweep_schemes.push_back(parse_scheme_spec(item, "sweep.schemes"));
            }
            if (w.contains("n_values")) {
                if (w.contains("n_min") || w.contains("n_max") || w.contains("count"))
                    throw ParameterError("config: give either sweep.n_values or sweep.n_min/n_max/count");
                cfg.sweep_steps = w.at("n_values").get<std::vector<std::size_t>>();
            } else if (w.contains("n_min") || w.contains("n_max") || w.contains("count")) {
                std::size_t lo = 10, hi = 1000, count = 20;
                read(w, "n_min", lo);
                read(w, "n_max", hi);
                read(w, "count", count);
                cfg.sweep_steps = log_spaced_steps(lo, hi, count);
            }
        }
        if (root.contains("output")) {
            const json& o = root.at("output");
            reject_unknown(o, {"path", "cache_dir"}, "output");
            if (o.contains("path")) cfg.output = o.at("path").get<std::string>();
            if (o.contains("cache_dir")) cfg.cache_dir = o.at("cache_dir").get<std::string>();
        }
    } catch (const json::exception& e) {
        throw ParameterError(std::string("config: ") + e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("config: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

}  // namespace bates
