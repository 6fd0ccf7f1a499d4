#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reasons::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kInputError = 2,     // malformed input or command line
    kPrecondition = 3,   // query called outside its domain
    kMismatch = 4,       // oracle-check found a disagreement
};

// Runs one command. `args` excludes the program name. Reports go to `out`
// (or the --output file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reasons::cli
