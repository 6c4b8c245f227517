// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace socbist {

enum class ErrorKind {
  Syntax,
  UnknownGate,
  UndefinedNet,
  CombinationalLoop,
  DuplicateCoreId,
  NonContiguousCoreIds,
  InfeasibleCore,
  InfeasibleSet,
  EmptySoc,
  CatalogTooLarge,
  MonotonicityViolation,
  OracleRangeExceeded,
  CurveMismatch,
  VectorWidthMismatch,
  ZeroSeed,
  InvalidTaps,
  InvalidArgument,
  Overflow,
  Io,
  Stuck,
};

const char* to_string(ErrorKind kind);

// Input and validation failures map to CLI exit code 2; Stuck and Overflow
// are internal and map to 1.
bool is_input_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0);

  ErrorKind kind() const noexcept { return kind_; }
  // 1-based source line, 0 when the error is not tied to a file position.
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
};

}  // namespace socbist
