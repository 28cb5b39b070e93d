#pragma once

#include <stdexcept>
#include <string>

namespace su11 {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A state could not be represented within the truncation cap.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The caller violated a structural precondition (e.g. handed a
/// Barut-Girardello state to a routine that needs a group orbit).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace su11
