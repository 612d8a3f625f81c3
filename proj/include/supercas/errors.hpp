#pragma once

#include <stdexcept>
#include <string>

namespace supercas {

/// Failure categories raised by the library. Input-type failures (bad
/// parameters, wrong form parity, degenerate forms, ...) are reported through
/// MathError; failed identity checks are reported through report objects.
enum class ErrorCode {
  InvalidParameters,
  PresentationMismatch,
  IndexOutOfRange,
  DegenerateForm,
  FormParityMismatch,
  NonDiagonalAction,
  ZeroOnRoot,
  MissingData,
  InfinitePartitions,
  NonScalarA,
  GradingIncompatible,
  UnsupportedDegree,
  OddCartan,
  NotAWeight,
  OutOfCone,
  ParseError,
};

const char* error_code_name(ErrorCode code);

class MathError : public std::runtime_error {
 public:
  MathError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace supercas
