#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Command dispatch for the CLI. Kept in the library so tests can run
// commands in-process and compare emitted bytes.

namespace sfcgame::cli {

// argv without the program name. Returns the process exit status: 0 on
// success, nonzero on any validation or invariant failure.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace sfcgame::cli
