#ifndef GERM_ERROR_HPP
#define GERM_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace germ {

enum class ErrorKind {
  DivisionByZero,
  FieldMismatch,
  PrecisionMismatch,
  ParseError,
  InvalidPrime,
  UnsupportedPrecision,
  NegativeAlpha,
  PrimeMismatch,
  UnsupportedPrime,
  BasinViolation,
  MissingCheckpoint,
  IllConditioned,
  OutOfRange,
  CensusMismatch,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::PrecisionMismatch: return "PrecisionMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidPrime: return "InvalidPrime";
    case ErrorKind::UnsupportedPrecision: return "UnsupportedPrecision";
    case ErrorKind::NegativeAlpha: return "NegativeAlpha";
    case ErrorKind::PrimeMismatch: return "PrimeMismatch";
    case ErrorKind::UnsupportedPrime: return "UnsupportedPrime";
    case ErrorKind::BasinViolation: return "BasinViolation";
    case ErrorKind::MissingCheckpoint: return "MissingCheckpoint";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::CensusMismatch: return "CensusMismatch";
  }
  return "Unknown";
}

// Domain error. Programming errors (broken internal invariants) are reported
// as std::logic_error instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

// Raised by the text parsers; `position` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(ErrorKind::ParseError, what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace germ

#endif  // GERM_ERROR_HPP
