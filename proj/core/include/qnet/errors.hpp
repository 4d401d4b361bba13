#pragma once

#include <stdexcept>
#include <string>

namespace qnet {

// Every failure raised by the library derives from Error, so callers that do
// not care about the category can catch a single type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mode or register does not fit the object it is combined with.
class DimensionError : public Error {
 public:
  DimensionError(const std::string& what, int port = 0) : Error(what), port_(port) {}
  // Offending 1-based port, or 0 when the mismatch is not port specific.
  int port() const noexcept { return port_; }

 private:
  int port_;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// Raised before an expansion that would exceed the term budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Input violates a structural invariant (e.g. a non-unitary "unitary").
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace qnet
