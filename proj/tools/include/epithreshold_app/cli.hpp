// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace epithreshold::app {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidConfig = 2,
  kExitNumerical = 3,
  kExitConditionNotMet = 4,
};

/// Entry point shared by the executable and the tests. argv[0] is the
/// program name. The report goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace epithreshold::app
