#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace friedrichs::cli {

enum ExitCode : int {
  exit_success = 0,
  exit_validation_failure = 1,
  exit_config_error = 2,
  exit_numeric_error = 3,
};

// Environment variable naming the output directory; --out takes precedence.
inline constexpr const char* out_dir_variable = "FRIEDRICHS_OUT";

// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace friedrichs::cli
