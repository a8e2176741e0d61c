#pragma once

// Command-line front end. run() is the whole program: it parses argv-style
// arguments, dispatches to a subcommand, and writes to the given streams,
// so tests can drive it without spawning processes.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
// 3 numeric or domain failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace gaugeforge::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gaugeforge::cli
