#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kms {

enum class Errc {
  NonNonnegativeTheta,
  SingularE,
  SingularMatrix,
  OutOfBox,
  NegativeInput,
  MeetNotZero,
  NegativeS,
  LevelMismatch,
  TopLevel,
  IncompatibleThread,
  InvalidThread,
  ThetaZero,
  InvalidArgument,
  InternalConsistency,
  ParseError,
  FileNotFound,
  WordParseError,
  UnknownSuite,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind instead of the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& what);

}  // namespace kms
