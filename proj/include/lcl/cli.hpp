// Experiment runner behind the `lcl` executable.
//
// Configuration precedence (later wins): built-in defaults for the command, the JSON file
// given by --config, then command-line flags. The resolved configuration is echoed to
// <out>/config.json and embedded in <out>/manifest.json.
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace lcl {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitHypothesis = 2;
inline constexpr int kExitUsage = 64;

const std::vector<std::string>& command_names();

/// Default configuration table of a command (throws std::invalid_argument if unknown).
nlohmann::ordered_json default_config(std::string_view command);

/// Merges file values and overrides into the defaults, rejects unknown keys, normalizes
/// scalar-or-list fields to lists and fills derived defaults.
nlohmann::ordered_json resolve_config(std::string_view command, const nlohmann::ordered_json& file,
                                      const nlohmann::ordered_json& overrides);

/// Runs a resolved configuration, writing reports and the manifest under config["out"].
/// Errors are reported on `err` and mapped to the exit codes above.
int run(const nlohmann::ordered_json& config, std::ostream& err);

/// Parses argv and dispatches; returns the process exit code.
int cli_main(int argc, char** argv);

}  // namespace lcl
