#include "kms/errors.hpp"

namespace kms {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonNonnegativeTheta: return "NonNonnegativeTheta";
    case Errc::SingularE: return "SingularE";
    case Errc::SingularMatrix: return "SingularMatrix";
    case Errc::OutOfBox: return "OutOfBox";
    case Errc::NegativeInput: return "NegativeInput";
    case Errc::MeetNotZero: return "MeetNotZero";
    case Errc::NegativeS: return "NegativeS";
    case Errc::LevelMismatch: return "LevelMismatch";
    case Errc::TopLevel: return "TopLevel";
    case Errc::IncompatibleThread: return "IncompatibleThread";
    case Errc::InvalidThread: return "InvalidThread";
    case Errc::ThetaZero: return "ThetaZero";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InternalConsistency: return "InternalConsistency";
    case Errc::ParseError: return "ParseError";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::WordParseError: return "WordParseError";
    case Errc::UnknownSuite: return "UnknownSuite";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace kms
