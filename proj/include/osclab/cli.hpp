#pragma once

namespace osclab {

/**
 * Full command-line entry point: parses arguments, dispatches to verify,
 * scan, or explain, and returns the process exit code (0 success, 1 check
 * failure, 2 usage or config error).  In-process so tests can drive it.
 */
int cli_run(int argc, const char* const* argv);

} // namespace osclab
