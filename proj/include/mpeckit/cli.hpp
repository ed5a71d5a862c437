#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mpeckit {

inline constexpr const char* kToolVersion = "mpeckit 0.1.0";
inline constexpr int kReportVersion = 1;

// Runs one command. args[0] is the program name. Returns the exit code:
// 0 success, 2 input error, 3 assumption violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpeckit
