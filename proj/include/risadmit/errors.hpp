#pragma once

#include <stdexcept>
#include <string>

namespace risadmit {

// Root of every error the library raises. Callers that only care about
// "something was wrong with the input" can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A direction or distance was requested between coincident points.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

// A configuration field failed validation. what() names the field.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class AllocationExceedsPanel : public Error {
 public:
  using Error::Error;
};

// Transmission delay requested over a link with zero capacity.
class ZeroRate : public Error {
 public:
  using Error::Error;
};

class ZeroAllocation : public Error {
 public:
  using Error::Error;
};

class InvalidNormalizer : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class MismatchedInputs : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace risadmit
