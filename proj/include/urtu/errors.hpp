#pragma once

#include <stdexcept>
#include <string>

namespace urtu {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad inputs: parameters, files, domains, capacities. CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class CapacityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Algorithm failed to converge or lost accuracy. CLI exit code 2.
class NumericError : public Error {
 public:
  using Error::Error;
};

class StiffnessError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace urtu
