#pragma once

#include <stdexcept>
#include <string>

#include "osclab/verifier.hpp"

namespace osclab {

/** Configuration or usage problem; maps to exit code 2 at the CLI. */
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** A suite configuration plus where to write the report. */
struct LabConfig {
    SuiteConfig suite;
    std::string report_path;
};

/**
 * Load a JSON config file.  Every key is optional and falls back to the
 * built-in default; unknown keys are rejected with their full field path,
 * malformed JSON is reported with line and column.
 */
LabConfig load_config(const std::string& path);

/** Same, from already-read text; origin names the source in messages. */
LabConfig parse_config_text(const std::string& text, const std::string& origin);

/** Apply the OSC_LAB_SEED environment override, when set. */
void apply_env_seed(SuiteConfig& cfg);

} // namespace osclab
