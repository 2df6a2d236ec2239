#pragma once

#include <stdexcept>
#include <string>

namespace bcnm {

// Malformed or unsupported input (bad edge list, empty graph, bad spec).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structural invariant of the engine was found broken. Never expected.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bcnm
