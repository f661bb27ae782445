#pragma once

#include <iosfwd>

namespace cfx {

// Entry point for the `cfx` tool. Subcommands: gen-data, train, evaluate,
// explain, importance, serve. Returns 0 on success, 2 on a usage error and 1
// when the command itself fails.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cfx
