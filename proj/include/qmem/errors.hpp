#pragma once

#include <stdexcept>
#include <string>

namespace qmem {

enum class ErrorCode {
  invalid_argument,
  numeric_failure,
  budget_exceeded,
  io_error,
};

/// Library-wide exception carrying a coarse error code for the C API.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail_invalid(const std::string& msg) {
  throw Error(ErrorCode::invalid_argument, msg);
}
[[noreturn]] inline void fail_numeric(const std::string& msg) {
  throw Error(ErrorCode::numeric_failure, msg);
}
[[noreturn]] inline void fail_budget(const std::string& msg) {
  throw Error(ErrorCode::budget_exceeded, msg);
}
[[noreturn]] inline void fail_io(const std::string& msg) {
  throw Error(ErrorCode::io_error, msg);
}

}  // namespace qmem
