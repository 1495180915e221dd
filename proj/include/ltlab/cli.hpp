#pragma once

#include <iosfwd>

namespace ltlab {

inline constexpr const char* kVersion = "0.1.0";

/// Entry point of the ltlab binary. Exit codes: 0 success, 2 argument or
/// input errors, 3 numerical failures, 4 false verdict under --assert.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ltlab
