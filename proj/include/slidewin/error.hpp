#pragma once

#include <stdexcept>
#include <string>

namespace slidewin {

enum class ErrorCode {
  InvalidArgument,
  InvalidWindowLength,
  InsufficientLength,
  InvalidK,
  Infeasible,
  DegenerateCentroid,
  DegenerateDenominator,
  RankDeficientSubspace,
  SizeGuard,
  MissingFile,
  ParseError,
  NonPositiveLog,
  Config,
  InvariantViolation,
};

/// Broad category used by the CLI to pick an exit status.
enum class ErrorKind { Argument, Config, Data, SizeGuard, Invariant };

inline ErrorKind kind_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::SizeGuard:
      return ErrorKind::SizeGuard;
    case ErrorCode::MissingFile:
    case ErrorCode::ParseError:
    case ErrorCode::NonPositiveLog:
    case ErrorCode::DegenerateDenominator:
    case ErrorCode::DegenerateCentroid:
      return ErrorKind::Data;
    case ErrorCode::Config:
      return ErrorKind::Config;
    case ErrorCode::InvariantViolation:
      return ErrorKind::Invariant;
    default:
      return ErrorKind::Argument;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return kind_of(code_); }

 private:
  ErrorCode code_;
};

/// Error raised while reading tabular input; carries the 1-based data row.
class RowError : public Error {
 public:
  RowError(ErrorCode code, std::size_t row, const std::string& what)
      : Error(code, what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace slidewin
