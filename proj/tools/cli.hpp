#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pyragas::cli {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kNumericError = 3 };

/// Radians, or a multiple of pi such as "pi/4", "-pi/4", "3*pi/4", "2pi".
/// Throws std::invalid_argument.
double parse_angle(const std::string& text);

/// Runs the command line (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pyragas::cli
