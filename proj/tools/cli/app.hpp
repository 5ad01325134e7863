#pragma once

#include <iosfwd>

namespace tavis::cli {

// Entry point shared by the executable and the tests. Returns the exit code:
// 0 success, 2 configuration error, 3 numerical failure, 1 anything else.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tavis::cli
