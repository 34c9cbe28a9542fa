#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wvres/cli/config.hpp"

namespace wvres::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 2,
    kExitNumericalFailure = 3,
    kExitValidationFailure = 4,
};

struct CommandOutcome {
    int exit_code = kExitOk;
    std::vector<std::filesystem::path> files;
};

/// Each command computes everything first and only then writes its files, so
/// a numerical failure leaves no partial outputs behind. Progress and
/// summaries go to `log`. Library errors propagate; run_command maps them
/// to exit codes.
CommandOutcome cmd_resonances(const RunConfig& config, std::ostream& log);
CommandOutcome cmd_flow(const RunConfig& config, std::ostream& log);
CommandOutcome cmd_region(const RunConfig& config, std::ostream& log);
CommandOutcome cmd_validate(const RunConfig& config, std::ostream& log);

/// Dispatch by name and translate exceptions into exit codes:
/// ConfigError/ParameterError -> 2, other numerical errors -> 3.
int run_command(const std::string& name, const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace wvres::cli
