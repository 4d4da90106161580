#pragma once

#include <stdexcept>
#include <string>

namespace hypercouple {

/// Failure categories. Values are stable; the C API reuses them as status codes.
enum class ErrorCode : int {
  kDomain = 1,
  kInadmissible = 2,
  kTooLarge = 3,
  kRejectionBudget = 4,
  kIllegalSwitch = 5,
  kInvalidConfig = 6,
  kIo = 7,
  kInternal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace hypercouple
