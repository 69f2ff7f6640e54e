#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eog/pipeline.hpp"

namespace eog::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

/// Parses and runs one command line; never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Pipeline settings as a flat JSON object (the config file format).
[[nodiscard]] nlohmann::json pipeline_config_json(const pipeline::PipelineConfig& config);
/// Overlays the keys of a config object; throws InvalidParameter on unknown keys or wrong types.
void apply_pipeline_json(const nlohmann::json& j, pipeline::PipelineConfig& config);
[[nodiscard]] nlohmann::json load_config_file(const std::filesystem::path& path);

/// Recordings named by the inputs in sorted order; directories are listed non-recursively and
/// sidecars are skipped.
[[nodiscard]] std::vector<std::filesystem::path> collect_recordings(const std::vector<std::string>& inputs);

}  // namespace eog::cli
