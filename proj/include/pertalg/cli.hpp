#pragma once

#include <string>
#include <vector>

namespace pertalg {

inline constexpr const char* kToolName = "pertalg";
inline constexpr const char* kToolVersion = "0.1.0";

/* Parses and runs one command line (program name excluded).  Writes the
 * report to stdout or the --out file and a one line summary to stderr.
 * Returns the process exit code: 0 when every requested check passes, 1 on
 * failed verification (the report is still emitted), 2 on malformed input
 * or usage. */
int run_command(const std::vector<std::string>& args);

}  // namespace pertalg
