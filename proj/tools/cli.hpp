#pragma once

#include <ostream>

namespace realcalc::cli {

enum ExitCode : int {
    kPass = 0,
    kFail = 1,
    kInputError = 2,
    kUnsupported = 3,
};

/// Runs one subcommand. The JSON report goes to `out`, the human summary to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace realcalc::cli
