#pragma once

#include <exception>
#include <iosfwd>

namespace realclock::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

/// Exit code for an exception escaping a run.
int exit_code_for(std::exception_ptr error) noexcept;

/// realclock-qm <command> --config <path> [--set key=value ...] --out <path>
///              [--format csv|json] [--seed N]
int run_app(int argc, const char* const* argv, std::ostream& err);

}  // namespace realclock::cli
