#pragma once

#include <stdexcept>
#include <string>

namespace sbq {

/// Shapes or subsystem dimensions do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An object failed its structural invariants (Hermiticity, unit trace,
/// unitarity, trace preservation, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parameter lies outside the hypothesis window of a bound or protocol.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Search exhausted its cap without finding a witness.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration key, value or command-line usage.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sbq
