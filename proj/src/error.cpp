#include "subattack/error.hpp"

namespace subattack {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::InvalidDimension: return "InvalidDimension";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::RegimeError: return "RegimeError";
    case ErrorKind::NoOrthogonalComplement: return "NoOrthogonalComplement";
    case ErrorKind::OracleTooExpensive: return "OracleTooExpensive";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SingularFit: return "SingularFit";
    case ErrorKind::UndefinedR2: return "UndefinedR2";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
      kind_(kind) {}

}  // namespace subattack
