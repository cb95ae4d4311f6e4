#pragma once

#include <iosfwd>

namespace blockdet::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kParse = 2, kResource = 3 };

/// Runs one command line. Reports go to `out`, diagnostics and timings to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace blockdet::cli
