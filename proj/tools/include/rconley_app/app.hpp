#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace rconley::app {

/// Schema violation in a run configuration; `key` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

inline const char* const kCommands[] = {"compute", "sweep", "timeh", "equiv"};

/// Validates a raw config for the command and returns it with every default
/// filled in. Applying it again yields the same document.
nlohmann::json resolve_config(const nlohmann::json& raw, const std::string& command,
                              std::optional<std::uint64_t> seed_override = std::nullopt);

struct CommandResult {
  nlohmann::json report;
  bool passed = false;
  /// Extra output files by name (CSV dumps, plot data, witnesses).
  std::map<std::string, std::string> files;
};

/// Runs a command on a resolved config. The report embeds the config and the tool version.
CommandResult run_command(const std::string& command, const nlohmann::json& resolved);

struct ReplayResult {
  bool identical = false;
  bool witnesses_ok = true;
  std::string detail;
};

/// Re-runs the config embedded in a report and compares the output byte for
/// byte; exported witnesses are re-verified from their relation tables alone.
ReplayResult verify_report(const nlohmann::json& report);

}  // namespace rconley::app
