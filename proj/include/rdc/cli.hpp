#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rdc::cli {

enum ExitCode : int {
  kOk = 0,
  kInfeasible = 1,  ///< also returned by `verify` when violations are found
  kUsage = 2,
  kIo = 3,
};

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses `start:end:count` (inclusive) or the literal `inf`.
std::vector<double> parse_grid(const std::string& spec);

/// Parses a bound: a nonnegative number or `inf`.
double parse_bound(const std::string& text);

}  // namespace rdc::cli
