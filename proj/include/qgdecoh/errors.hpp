#pragma once

#include <stdexcept>
#include <string>

namespace qgdecoh {

// Bad argument supplied by a caller (negative separation, t outside the
// trajectory domain, malformed measurement, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Adding metres to seconds. A programming bug when raised from library
// code; surfaced as a clean diagnostic when the quantity came from config.
class DimensionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Quadrature non-convergence, overflow to a non-finite value, loss of
// Hermiticity or positivity.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax or validation failure while reading an experiment config. `line`
// is 0 when the error is not tied to a specific line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, unsigned long line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}
  unsigned long line() const noexcept { return line_; }

 private:
  unsigned long line_;
};

}  // namespace qgdecoh
