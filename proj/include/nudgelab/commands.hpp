#pragma once

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nudge {

enum ExitCode : int {
    kExitOk = 0,
    kExitOther = 1,
    kExitConfig = 2,
    kExitDivergence = 3,
    kExitMismatch = 4,
    kExitFormat = 5,
};

struct CommandOptions {
    std::string config_path;
    std::optional<double> override_mu;
    std::optional<std::string> out_dir;
    /// Extra positional inputs (analyze: CSV paths; check-condition: stream path).
    std::vector<std::string> inputs;
};

/// Maps a library exception to the documented exit code.
int exit_code_for(const std::exception& e);

/// Runs simulate | assimilate | check-condition | analyze | sweep; errors are reported on err.
int run_command(const std::string& name, const CommandOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace nudge
