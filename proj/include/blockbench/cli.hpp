#pragma once

#include <iosfwd>

namespace blockbench {

/// Entry point of the `blockbench` tool. Exit codes: 0 success, 1 I/O or
/// parse error, 2 infeasible or invalid request, 3 resource ceiling.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace blockbench
