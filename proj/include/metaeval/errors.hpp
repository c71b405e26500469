#pragma once

#include <stdexcept>

namespace metaeval {

// File/format/argument problems. The CLI maps these to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A statistic cannot be computed on the given data (too few pairs, zero
// usable segments, degenerate normalization). CLI exit code 2.
class DegenerateStatisticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace metaeval
