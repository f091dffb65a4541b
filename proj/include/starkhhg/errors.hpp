#pragma once

#include <stdexcept>
#include <string>

namespace starkhhg {

// Invalid argument to a physical operation (non-finite time, negative
// intensity, ionization time outside the pulse, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested frequency lies outside the classical range of a branch.
class OutOfRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Invalid run configuration. The message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// A model assumption broke down during a computation (for example the
// adiabatic Stark-shifted level crossed the continuum).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace starkhhg
