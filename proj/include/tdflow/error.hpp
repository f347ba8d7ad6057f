#pragma once

#include <stdexcept>
#include <string>

namespace tdflow {

/// Invalid problem or run configuration (geometry, boundary specs, config files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument passed to a numerical operation.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linear solver failure. Carries the reciprocal condition estimate reported
/// by the factorization (0 when the matrix is numerically singular).
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double rcond)
      : std::runtime_error(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

/// A runtime-checked invariant of the optimization loop was violated.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tdflow
