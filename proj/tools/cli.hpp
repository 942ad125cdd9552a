#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gramkit::cli {

/// Exit statuses of the command-line tool.
enum Status : int {
    kOk = 0,            // computed, every asserted identity held
    kInconclusive = 1,  // computed, but a certificate did not pass
    kViolation = 2,     // a theorem identity failed numerically
    kUsage = 64,        // bad arguments or unreadable input
};

/// Runs one command line (args[0] is the program name). Results go to `out`
/// unless an output path is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gramkit::cli
