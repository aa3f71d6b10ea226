#pragma once

#include <stdexcept>
#include <string>

namespace bayesum {

/// Malformed input files, broken referential integrity, unknown ids.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Non-finite bounds, degenerate likelihoods and similar numerical failures.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace bayesum
