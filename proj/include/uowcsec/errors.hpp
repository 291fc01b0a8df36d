// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace uowcsec {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A series or iteration did not reach its tolerance within the term budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The result is not representable (overflow/underflow of double).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A combinatorial enumeration exceeded its configured budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Any other numerical failure (contour placement, misconvergence, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace uowcsec
