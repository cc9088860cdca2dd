#ifndef UBOUND_ERRORS_HPP
#define UBOUND_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace ubound {

enum class ErrorCode {
  NotSquare,
  NotHermitian,
  InvalidPovm,
  InvalidSpin,
  AlphaOutOfRange,
  DimensionMismatch,
  NotNormalized,
  ConvergenceFailure,
  EmptyBox,
  EmptyPolytope,
  NumericalFailure,
  ThetaOutOfRange,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (and the CLI) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace ubound

#endif  // UBOUND_ERRORS_HPP
