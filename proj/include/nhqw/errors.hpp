#pragma once

#include <stdexcept>
#include <string>

namespace nhqw {

// Bad value fed to a library operation (out-of-range parameter,
// unnormalized state, wrong boundary kind).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure at run time: solver non-convergence, residual contract
// violation, amplitude about to leave an open lattice, ill-posed winding.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Scenario-file problem: unknown key, missing key, unparsable or
// out-of-range value. Carries the offending key and line when known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
  ConfigError(const std::string& key, int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", key '" + key + "': " + what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nhqw
