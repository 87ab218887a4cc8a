#pragma once

#include <stdexcept>
#include <string>

namespace cfsvp {

// Bad user input: zero channel, nonpositive power, scaled vector outside the unit ball, ...
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The quadratic form evaluated to a nonpositive value; only floating-point breakdown can cause this.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The brute-force oracle declined an instance whose enumeration would be too large.
class OracleLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cfsvp
