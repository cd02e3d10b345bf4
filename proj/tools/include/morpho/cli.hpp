#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace morpho {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 1,  ///< bad arguments, parse or validation errors
  kExitRuntime = 2,  ///< simulation or I/O failure
};

/// Entry point of `morphonmpc`; `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace morpho
