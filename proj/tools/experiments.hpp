// experiments.hpp
// Named experiment configurations: validated JSON config in, CSV/JSON
// artifacts out. One experiment per process invocation.

#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace bfree::cli {

// Validates the config against the documented shape (docs/experiment_schema.json)
// and throws std::invalid_argument with a diagnostic on any mismatch.
void validate_experiment_config(const nlohmann::json& config);

// Runs the experiment named in the config, writing artifacts under out_dir.
// Returns a short human-readable summary for stdout.
std::string run_experiment(const nlohmann::json& config, const std::filesystem::path& out_dir);

} // namespace bfree::cli
