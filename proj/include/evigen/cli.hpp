#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace evigen {

/// Exit statuses of the `evigen` command.
enum ExitCode : int {
  kExitOk = 0,
  kExitFalse = 1,    // a verification result is false, or a trace chain is broken
  kExitInput = 2,    // usage, parse, schema, trace or integrity errors
  kExitBackend = 3,  // an external verifier could not be run
};

/// Entry point behind `evigen`; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evigen
