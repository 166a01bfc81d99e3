#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace sevseg::cli {

enum ExitCode : int {
    kSuccess = 0,
    kValidationError = 1,
    kIoError = 2,
};

struct CommandOutcome {
    int exit_code{kSuccess};
    /// Everything written to the output stream.
    std::string report;
    /// Files written by the command.
    std::vector<std::filesystem::path> artifacts;
};

/// Runs one command line. `args` excludes the program name. Normal output goes
/// to `out`; diagnostics and usage text go to `err` and only on failure.
CommandOutcome run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sevseg::cli
