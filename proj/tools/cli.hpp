#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace macrosize::cli {

// Process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_parse = 2,
    exit_domain = 3,
    exit_reconstruction = 4,
};

// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace macrosize::cli
