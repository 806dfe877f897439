#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace subattack {

enum class ErrorKind {
  InvalidMatrix,
  InvalidDimension,
  InvalidArgument,
  RankMismatch,
  RegimeError,
  NoOrthogonalComplement,
  OracleTooExpensive,
  ParseError,
  SingularFit,
  UndefinedR2,
  IoError,
};

std::string_view error_kind_name(ErrorKind kind);

/// Library-wide exception. `kind()` lets callers (the CLI in particular) map
/// failures onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace subattack
