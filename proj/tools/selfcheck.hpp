#ifndef SUPERLENS_TOOLS_SELFCHECK_HPP
#define SUPERLENS_TOOLS_SELFCHECK_HPP

#include <iosfwd>

namespace superlens::tools {

/// Fast oracle/property sweep behind the `validate` subcommand: closed forms
/// against their independent oracles, the special-case scaling factors, a
/// coarse-grid forward-solver check, and noise determinism. Prints one
/// PASS/FAIL line per check and returns the number of failures.
int run_selfcheck(std::ostream& os);

}  // namespace superlens::tools

#endif  // SUPERLENS_TOOLS_SELFCHECK_HPP
