#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace biphoton {

struct RunOptions {
    int threads = 1;             // scan points computed in parallel when > 1
    std::string materials_path;  // empty = default resolution order
};

struct RunOutputs {
    std::vector<std::string> files;  // paths written (CSV then summary)
    nlohmann::json summary;
};

// Strict schema validation: every key checked, unknown keys rejected; throws
// config_error naming the offending key. Material names are resolved against
// the database.
void validate_config(const nlohmann::json& config, const std::string& materials_path = "");
void validate_config_file(const std::string& path, const std::string& materials_path = "");

// Shape check for emitted summaries (schema round-trip guard).
void validate_summary(const nlohmann::json& summary);

// Parses, validates and runs one experiment config; writes one CSV per scan
// plus a JSON summary. Output is deterministic for a fixed config and seed,
// regardless of thread count.
RunOutputs run_experiment(const std::string& config_path, const RunOptions& options = {});

// Full command-line interface (run / validate / materials list); returns the
// process exit code: 0 ok, 2 config error, 3 numerical failure, 4 I/O.
int cli_main(const std::vector<std::string>& args);

}  // namespace biphoton
