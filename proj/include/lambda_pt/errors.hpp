#pragma once

#include <stdexcept>
#include <string>

namespace lambda_pt {

// Base of every typed failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class DegenerateCoupling : public InvalidParams {
 public:
  using InvalidParams::InvalidParams;
};

// Eigenvectors coalesce; H is not diagonalizable.
class ExceptionalPointError : public Error {
 public:
  using Error::Error;
};

class FrameMismatch : public Error {
 public:
  using Error::Error;
};

class StepOverflow : public Error {
 public:
  using Error::Error;
};

class InvalidGrid : public Error {
 public:
  using Error::Error;
};

}  // namespace lambda_pt
