#pragma once

#include <stdexcept>
#include <string>

namespace lmqf {

/// A precondition on user-supplied parameters does not hold.
/// The message names the violated condition, e.g. "alpha*beta <= 1: series diverges".
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters fall outside every region a limit theorem covers.
class NotCoveredError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace lmqf
