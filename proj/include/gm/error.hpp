#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gm {

enum class ErrorCode {
  invalid_argument,
  non_commuting_square,
  tensor_not_closed,
  kind_mismatch,
  not_functorial,
  bound_exceeded,
  unsupported_kind,
  grade_violation,
  not_a_grading,
  precondition_failed,
  square_does_not_commute,
  skew_not_supported,
  parse_error,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gm
