#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace autohedge {

enum ExitCode { exit_ok = 0, exit_config_error = 2, exit_runtime_error = 3 };

/// Runs one subcommand; `args` excludes the program name. Messages go to
/// `out` and `err`, data files under --out.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace autohedge
