#pragma once

#include <iosfwd>

namespace capbody {

// Full command-line driver, separated from main() so tests can invoke it.
// Exit codes: 0 success / verified, 1 verification or search failure,
// 2 usage and input validation errors, 3 internal invariant violations.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace capbody
