#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qh {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kExitPass = 0, kExitVerdictFail = 1, kExitError = 2, kExitUsage = 64 };

/// Runs one `qh` command (args exclude the program name). Results go to `out`, diagnostics to
/// `err`; files are written only where requested.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qh
