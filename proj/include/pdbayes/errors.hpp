#pragma once

#include <stdexcept>
#include <string>

namespace pdbayes {

/// Bad input: malformed data, out-of-range parameters, points outside the wedge.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that is well-posed but numerically degenerate, e.g. a model
/// that assigns zero likelihood to the observed diagrams.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pdbayes
