#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace alpern {

enum class ErrorCode {
  Syntax,
  Validation,
  ZeroCell,
  BreakpointOffGrid,
  InvalidArgument,
  NegativeMass,
  TooShort,
  QuotaNegative,
  QuotaUnmet,
  MisalignedHandoff,
  AQuotaUnmet,
  NotRich,
  Exhausted,
  GridTooLarge,
  MalformedSelection,
  Overflow,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. `where()` names the column (or file
// line) the failure refers to, when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string where = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& where() const noexcept { return where_; }

 private:
  ErrorCode code_;
  std::string where_;
};

}  // namespace alpern
