#pragma once

#include <stdexcept>
#include <string>

namespace heatseek {

// Raised for every input or contract violation. The CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heatseek
