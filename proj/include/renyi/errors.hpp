// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace renyi {

/// Base class of all errors thrown by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad inputs: malformed probabilities, out-of-domain parameters, bad wire data.
class ValidationError : public Error {
  public:
    using Error::Error;
};

class NegativeEntryError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class MassDeviationError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class ZeroMarginalError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class AlphabetMismatchError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class MalformedBitstringError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// Resource-budget refusals; distinct from validation so callers can map
/// them to a different process exit code.
class BudgetError : public Error {
  public:
    using Error::Error;
};

class BlockTooLargeError : public BudgetError {
  public:
    using BudgetError::BudgetError;
};

class InstanceTooLargeError : public BudgetError {
  public:
    using BudgetError::BudgetError;
};

} // namespace renyi
