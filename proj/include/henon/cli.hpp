#pragma once

// Command line front end. run() never throws; it returns the process exit
// code: 0 success, 2 degenerate exponent, 3 no convergence, 4 invalid
// configuration, 5 solver failure.

#include <ostream>
#include <string>
#include <vector>

namespace henon::cli {

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

// Reads key=value lines ('#' comments, blank lines ignored) and appends
// "--key value" for every key not already given as a flag in args. A key
// "command" supplies the subcommand when args has none.
std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::string& path);

}  // namespace henon::cli
