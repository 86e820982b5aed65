#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// that tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace cognilog::cli {

enum ExitCode : int { ok = 0, failure = 1, usage = 2, internal = 3 };

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cognilog::cli
