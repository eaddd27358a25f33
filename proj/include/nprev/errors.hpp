#pragma once

#include <stdexcept>
#include <string>

namespace nprev {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid generating curve: touches the axis, self-intersects, wrong orientation.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kernel evaluated at a coincident pair where only the split form is defined.
class SingularEvaluationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Discretization or eigensolver failure (loss of definiteness, non-convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed run configuration. `key` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace nprev
