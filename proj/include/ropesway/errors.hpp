#pragma once

#include <stdexcept>
#include <string>

namespace ropesway {

// Process exit codes shared by the CLI and the subprocess tests.
enum class ExitCode : int {
  ok = 0,
  config = 2,       // bad key, bad value, violated parameter invariant
  integration = 3,  // non-finite state or solver failure
  io = 4,           // filesystem problems
  verify = 5        // one or more verification checks failed
};

/// Configuration problem. The message carries the offending key path
/// (e.g. "rope.l_dp") so the CLI can print an actionable error.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Argument outside the physical domain of an operation (e.g. a station
/// outside [0, l]).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Time integration produced a non-finite state. Carries the step index.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& msg, long step)
      : std::runtime_error(msg + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ropesway
