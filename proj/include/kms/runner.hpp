#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace kms {

/// Rejected configuration input (unknown key, wrong type, unknown experiment).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string experiment;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    int threads = 1;
    bool quiet = false;
    nlohmann::json params = nlohmann::json::object();
};

/// Names of the available experiments.
std::vector<std::string> experiment_names();

/// Parse and validate a config document. Unknown keys anywhere are errors, as
/// are type mismatches and unknown experiment or parameter names.
RunConfig parse_run_config(const nlohmann::json& doc);

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double bound = 0.0;
    std::string note;
};

struct RunOutcome {
    std::string status = "error";  ///< "ok" | "check_failed" | "error"
    std::string stage;             ///< last stage reached
    std::string message;           ///< error text when status == "error"
    std::vector<CheckResult> checks;
    std::string manifest_path;

    bool ok() const { return status == "ok"; }
};

/// Run one experiment. A manifest (config echo, conventions, checks, output
/// files with checksums, status) is written to the output directory even when
/// the run fails; only a config-level error prevents that.
RunOutcome run_experiment(const RunConfig& cfg);

}  // namespace kms
