#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace emotikon::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kRuntime = 3 };

// Runs one command line (without the program name). Regular output goes to
// `out`; diagnostics and usage text go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Worker count from EMOTIKON_WORKERS, or 1 when unset.
unsigned default_workers();

}  // namespace emotikon::cli
