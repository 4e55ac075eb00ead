#pragma once

#include <string>
#include <vector>

#include "qbus/cli/config.hpp"

namespace qbus::cli {

/// Run a resolved command; returns the paths written (resolved_config.json included).
std::vector<std::string> run_command(const RunConfig& cfg);

/// Entry point shared by the executable: parses argv and maps errors to exit codes
/// (0 ok, 2 config, 3 physics validation, 4 numerical failure).
int main_entry(int argc, char** argv);

}  // namespace qbus::cli
