#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qbus::cli {

inline constexpr const char* kToolVersion = "qbus 0.1.0";

/// Subcommands in the order they are listed by --help.
const std::vector<std::string>& command_names();

/// Flag values that override config keys when present.
struct Overrides {
  std::optional<std::string> output;
  std::optional<std::string> engine;
  std::optional<std::uint64_t> seed;
  std::optional<int> cutoff;
};

/// Fully resolved settings of one run. `params` holds the command-specific
/// block with every default filled in.
struct RunConfig {
  std::string command;
  std::string engine;
  int cutoff = 1;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  int workers = 0;  // 0: OpenMP default
  std::string output = "out";
  nlohmann::json params;

  nlohmann::json to_json() const;
};

/// Defaults for a command, in the same layout as the config file.
nlohmann::json default_config(const std::string& command);

/// Merge a config document over the defaults. Unknown keys, wrong types and
/// engines the command does not support raise ConfigError.
RunConfig resolve_config(const std::string& command, const nlohmann::json& document, const Overrides& overrides = {});

/// Parse a JSON file (ConfigError on I/O or syntax problems).
nlohmann::json read_json_file(const std::string& path);

}  // namespace qbus::cli
