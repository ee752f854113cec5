#pragma once

#include <iosfwd>
#include <string>

#include "ropesway/simulation.hpp"

namespace ropesway {

// A fully resolved run: scenario preset + overrides + output destination.
// Serialized as flat `section.key=value` lines (LF, '#' comments), so configs
// diff cleanly and round-trip exactly: parse(emit(c)) == c.
struct RunConfig {
  std::string scenario = "impulse";  // impulse | sustained | custom
  std::string out_dir;
  ScenarioSpec spec;

  // Preset for a scenario name; throws ConfigError for unknown names.
  static RunConfig preset(const std::string& scenario);
};

// Applies key=value lines on top of `base`. A `scenario=` line re-bases onto
// that preset first (so file order does not matter). Unknown keys, malformed
// values, and invariant violations throw ConfigError naming the key.
RunConfig parse_config_text(const std::string& text, const RunConfig& base);

// Reads the file (throws IoError when unreadable) and parses it.
RunConfig parse_config_file(const std::string& path, const RunConfig& base);

// Every key in a fixed order with 17-significant-digit numbers.
std::string emit_config(const RunConfig& cfg);

// Full cross-module validation; throws ConfigError naming the first
// violated key.
void validate_config(const RunConfig& cfg);

}  // namespace ropesway
