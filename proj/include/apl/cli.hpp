#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace apl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;

/// Runs one command line (args excludes the program name). Reports go to the
/// files named by --out/--csv or to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// APL_THREADS, or the hardware concurrency when unset.
unsigned thread_budget();

}  // namespace apl::cli
