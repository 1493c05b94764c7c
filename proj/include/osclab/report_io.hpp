#pragma once

#include <string>
#include <vector>

#include "osclab/config.hpp"
#include "osclab/verifier.hpp"

namespace osclab {

/**
 * Render the report as JSON text: UTF-8, keys sorted, two-space indent,
 * trailing newline.  The effective configuration is echoed under "config"
 * in the same schema the loader accepts, so a report can reproduce its own
 * run.  Wall time is the only nondeterministic field; leaving it out makes
 * reports from identical runs byte-identical.
 */
std::string report_to_json(const Report& report, const LabConfig& cfg,
                           bool include_wall_time);

/** Write text to path through a temporary file and an atomic rename. */
void write_text_atomic(const std::string& path, const std::string& text);

/** One CSV artifact: a comment line, a header row, data rows. */
struct ScanTable {
    std::string comment;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/** RFC-4180 rendering (CRLF rows, quoting when needed), preceded by the
 *  '#' comment line. */
std::string render_csv(const ScanTable& table);

/** Residual landscape across the configured boost list. */
ScanTable scan_boost(const LabConfig& cfg);

/** Residual landscape across total excitation levels qn_min..qn_max. */
ScanTable scan_level(const LabConfig& cfg);

/** Spectrum and constraint behavior across mass ratios at fixed total mass. */
ScanTable scan_mass_ratio(const LabConfig& cfg);

} // namespace osclab
