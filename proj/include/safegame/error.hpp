#ifndef SAFEGAME_ERROR_HPP
#define SAFEGAME_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace safegame {

enum class ErrorCode {
  DimensionMismatch,
  DegenerateScale,
  OutOfRange,
  NumericalFailure,
  UnboundedRegion,
  InfeasibleRegion,
  EmptyRestriction,
  InfeasibleRequirement,
  Not2x2,
  ParseError,
  DimensionError,
  InvalidArgument,
};

std::string_view toString(ErrorCode code);

// All library failures are reported through this type; `code()` lets callers
// (the CLI in particular) dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(toString(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace safegame

#endif  // SAFEGAME_ERROR_HPP
