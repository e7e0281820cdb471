#pragma once

#include "bates/harness.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bates {

/// Parsed experiment file. Sections: model, grid, scheme, sweep, output.
/// Unknown keys anywhere raise ParameterError.
struct RunConfig {
    CaseConfig case_config = load_case("I");
    SchemeConfig scheme;
    std::size_t n_ref = kDefaultReferenceSteps;
    std::vector<SchemeSpec> sweep_schemes = figure_schemes();
    std::vector<std::size_t> sweep_steps = log_spaced_steps();
    std::optional<std::filesystem::path> output;
    std::optional<std::filesystem::path> cache_dir;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace bates
