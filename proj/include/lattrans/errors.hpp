#pragma once

#include <stdexcept>
#include <string>

namespace lattrans {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
 public:
  SingularMatrix() : Error("matrix is singular") {}
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite() : Error("matrix is not positive definite") {}
  using Error::Error;
};

class NotRightHanded : public Error {
 public:
  NotRightHanded() : Error("basis is not right-handed (det <= 0)") {}
  using Error::Error;
};

class InfeasibleAngles : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error("zero vector") {}
};

class NotUnimodular : public Error {
 public:
  using Error::Error;
};

class VerificationFailed : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace lattrans
