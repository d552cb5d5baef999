#pragma once

#include <stdexcept>
#include <string>

namespace rconley {

/// Invalid input: bad parameters, mismatched grids, exhausted windows.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A construction that could not be completed at the current resolution or window.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rconley
