#pragma once

#include <string>
#include <vector>

#include "motun/driver.hpp"

namespace motun {

struct CliCommand {
    enum class Kind { Run, List, CheckGradients };
    Kind kind = Kind::List;
    RunConfig run;        ///< for Run
    std::string problem;  ///< for CheckGradients; empty means all problems
    int samples = 100;    ///< for CheckGradients
};

/// Parses argv (without the program name). Throws UsageError with a message
/// naming the offending flag or subcommand.
CliCommand parse_cli(const std::vector<std::string>& args);

/// Executes a parsed command. Returns the process exit code:
/// 0 success, 2 runtime failure. (Usage errors surface as UsageError from
/// parse_cli and map to exit code 1.)
int run_cli(const CliCommand& command);

} // namespace motun
