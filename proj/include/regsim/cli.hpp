#pragma once

#include <ostream>

namespace regsim {

/// Exit codes of the command-line entry point.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Parses argv and runs one verb. Progress goes to `err`, the key=value
/// summary to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace regsim
