#pragma once

#include <string>
#include <vector>

namespace cmll {

// Exit codes: 0 ok, 2 unknown subcommand/usage, 3 validation error,
// 4 internal consistency error (a falsified structural identity).
struct CommandResult {
    int exit_code{0};
    std::string output;   // JSON on success, human-readable message on error
    std::string out_file; // nonempty when --out FILE was requested
};

CommandResult run_command(const std::vector<std::string>& args);

} // namespace cmll
