#ifndef CRITNET_TOOLS_CLI_H
#define CRITNET_TOOLS_CLI_H

#include <iosfwd>

namespace critnet {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInvalid = 2,  // infeasible instance or failed validation
  kExitInternal = 3,
};

// Parses argv and runs one subcommand. Results are written to the output
// directory (--out-dir, else $CRITNET_OUT_DIR, else "."); a short summary goes
// to `out` and diagnostics to `err`.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace critnet

#endif  // CRITNET_TOOLS_CLI_H
