#pragma once

#include <map>
#include <string>
#include <vector>

namespace profin {

/// A parsed command line: one verb plus validated key/value flags.
/// Unknown verbs, unknown keys and missing required keys are Usage errors
/// naming the first bad token.
struct Command {
    std::string verb;
    std::map<std::string, std::string> args;
    std::vector<std::string> positionals;  // dist only: metric w1 w2

    bool has(const std::string& key) const { return args.count(key) > 0; }
    const std::string& get(const std::string& key) const { return args.at(key); }
};

Command parse_command(const std::vector<std::string>& argv);

/// Result of running a command. The body is deterministic for identical
/// inputs and convention version; timing is reported separately so reports
/// stay byte-comparable.
struct RunReport {
    std::string body;
    int exit_code = 0;
    double time_ms = 0.0;
};

RunReport execute(const Command& cmd);

/// Full entry point: parse, execute, print body to stdout and timing to
/// stderr, map errors to exit codes (2 usage, 3 domain, 4 size limit).
int cli_main(int argc, char** argv);

}  // namespace profin
