#pragma once

#include <ostream>

namespace ensbfc {

// Entry point of the ensbfc command line. Returns the process exit code:
// 0 on success, 2 on configuration or usage errors, 1 on other failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ensbfc
