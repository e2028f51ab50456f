#pragma once

// The `cdp` command line: solve, oracle, gen and check subcommands.
//
// Exit codes: 0 success (an unsatisfiable model included), 1 usage or I/O
// error, 2 model, parse or lowering error, 3 a limit was exceeded,
// 4 `check` found a violated property.

#include <iosfwd>
#include <string>
#include <vector>

namespace cdp {

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdp
