#pragma once

#include <stdexcept>
#include <string>

namespace ope {

using StateId = int;
using ObservationId = int;
using ActionId = int;
using OptionId = std::string;

// Malformed configuration or unknown identifiers. The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite estimates or refused numerical work. The CLI maps it to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ope
