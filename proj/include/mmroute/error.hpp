#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mmroute {

enum class ErrorCode {
  degenerate_geometry,
  topology,
  spec,
  not_found,
  contract_violation,
  malformed_action,
  lifecycle,
  config,
  io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code tells callers which
/// contract was broken.
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
  if (!condition) fail(code, message);
}

}  // namespace mmroute
