#pragma once

#include <stdexcept>
#include <string>

namespace mmg {

enum class ErrorCode {
  InvalidArgument = 1,
  Domain = 2,
  Budget = 3,
  NoStrategy = 4,
  Io = 5,
  Parse = 6,
  Invariant = 7,
};

// All library failures are reported through this type; the C layer maps
// `code()` onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace mmg
