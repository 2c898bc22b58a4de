#pragma once

#include <stdexcept>
#include <string>

namespace oqb {

// Bad user input: parameters, config files, unsupported regimes.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical guard tripped (resonant denominators, energy blow-up,
// solver failure). The CLI maps this to exit code 2.
class NumericalGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oqb
