#pragma once

#include <iosfwd>

namespace tfloc {

// Full command-line surface: parses argv, dispatches to the library, and
// writes the JSON/CSV document to `out` (or the --out file). Returns the
// process exit code: 0 success, 2 invalid input, 3 numerical
// non-convergence, 4 verification failure.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace tfloc
