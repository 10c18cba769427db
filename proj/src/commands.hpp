#pragma once

// Batch command dispatch behind the C API and the command-line tool. A
// command is described by one JSON config record (subcommand plus options);
// outputs land under the configured directory. Exit codes: 0 success,
// 1 bad input, 2 computation failure, 3 verification failure.

#include <string>

namespace rshapes {

struct CommandResult {
    int exit_code = 0;
    std::string report;  // human-readable stdout text
    std::string error;   // stderr message when exit_code != 0
};

CommandResult run_command_json(const std::string& config_text);

}  // namespace rshapes
