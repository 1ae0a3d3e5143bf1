#pragma once

#include <iosfwd>

namespace bellsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitUndefined = 3;

/// Entry point of the bellsim tool, with its streams injected for testing.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bellsim::cli
