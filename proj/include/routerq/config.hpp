#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "routerq/scenario.hpp"

namespace routerq {

// Parse failure with the offending position in the config text.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, int column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", col " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Parses the line-oriented `key = value` scenario format (see README).
// `scenario = A|B|C|D` loads a builtin grid and accepts only run-length
// overrides; `scenario = custom` opens the full key set. Unknown keys are
// errors.
ScenarioSpec parse_config(const std::string& text);

// Canonical text rendering of an effective spec. Stable across runs; the
// manifest config hash is computed over this form.
std::string canonical_config(const ScenarioSpec& spec);

// FNV-1a 64-bit digest, printed as 16 hex digits in the manifest.
std::uint64_t fnv1a64(const std::string& text);

}  // namespace routerq
