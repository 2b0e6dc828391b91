#pragma once

#include <iosfwd>

namespace spinsteer {

// Exit codes: 0 success, 1 usage or input error, 2 verification failure
// (residual above tolerance, or a negative reachability verdict).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinsteer
