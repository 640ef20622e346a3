#pragma once

#include <stdexcept>
#include <string>

namespace qland {

/// Operand shapes do not fit together (e.g. a 4x4 operator on a 2-dim factor).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scalar argument lies outside the admissible range of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A value object failed its invariant check (norm, unitarity, ...).
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qland
