#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eitgap {

enum ExitCode : int {
  exit_success = 0,
  exit_config_error = 1,
  exit_numerical_failure = 2,
  exit_validity_failure = 3,
};

/// Runs one subcommand: band, reflect, evolve, protocol or check.
/// `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, const char* const* argv);

}  // namespace eitgap
