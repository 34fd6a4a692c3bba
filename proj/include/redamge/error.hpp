#pragma once

#include <stdexcept>
#include <string>

namespace redamge {

enum class ErrorCode {
  invalid_argument = 1,
  config = 2,
  build = 3,
  estimator = 4,
  io = 5,
  kind_mismatch = 6,
  dimension_mismatch = 7,
  solver = 8,
  conformity = 9,
  partition = 10,
};

/// Library-wide exception. The code maps one-to-one onto the C API status values.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace redamge
