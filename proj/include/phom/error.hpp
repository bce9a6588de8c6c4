#pragma once

#include <stdexcept>
#include <string>

namespace phom {

// Exit codes of the command-line tool, one per error family.
enum class ExitCode : int {
  kSuccess = 0,
  kInput = 1,
  kNumerical = 2,
  kIo = 3,
};

// Malformed or out-of-contract input (bad shapes, bad CSV, invalid config).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Training diverged or produced a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures; the message always carries the offending path.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// API misuse, e.g. back-propagating through a tape recorded for other params.
class UsageError : public std::logic_error {
 public:
  explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace phom
