#pragma once

#include <iosfwd>

namespace sparseca::cli {

/// Runs the command line. Exit codes: 0 success, 2 usage or validation
/// error, 1 runtime failure (I/O, numerical breakdown).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sparseca::cli
