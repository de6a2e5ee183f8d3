#pragma once

namespace vbpw {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitNumerical = 2,
  kExitVerification = 3,
};

/// Parses the command line, runs one subcommand and returns the exit code.
/// Diagnostics go to stderr.
int run_cli(int argc, char** argv);

}  // namespace vbpw
