#pragma once

#include <iosfwd>

namespace snlp {

/// Parses argv, runs one command and writes its JSON report to `out` (or to
/// --out). Returns 0 on success, 1 on a numerical failure and 2 on a usage
/// error. Never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace snlp
