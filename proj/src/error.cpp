// SPDX-License-Identifier: Apache-2.0
#include "socbist/error.hpp"

namespace socbist {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownGate: return "UnknownGate";
    case ErrorKind::UndefinedNet: return "UndefinedNet";
    case ErrorKind::CombinationalLoop: return "CombinationalLoop";
    case ErrorKind::DuplicateCoreId: return "DuplicateCoreId";
    case ErrorKind::NonContiguousCoreIds: return "NonContiguousCoreIds";
    case ErrorKind::InfeasibleCore: return "InfeasibleCore";
    case ErrorKind::InfeasibleSet: return "InfeasibleSet";
    case ErrorKind::EmptySoc: return "EmptySoc";
    case ErrorKind::CatalogTooLarge: return "CatalogTooLarge";
    case ErrorKind::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorKind::OracleRangeExceeded: return "OracleRangeExceeded";
    case ErrorKind::CurveMismatch: return "CurveMismatch";
    case ErrorKind::VectorWidthMismatch: return "VectorWidthMismatch";
    case ErrorKind::ZeroSeed: return "ZeroSeed";
    case ErrorKind::InvalidTaps: return "InvalidTaps";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Stuck: return "Stuck";
  }
  return "Error";
}

bool is_input_error(ErrorKind kind) {
  return kind != ErrorKind::Stuck && kind != ErrorKind::Overflow;
}

static std::string decorate(ErrorKind kind, const std::string& message, std::size_t line) {
  std::string out = to_string(kind);
  if (line != 0) out += " (line " + std::to_string(line) + ")";
  out += ": ";
  out += message;
  return out;
}

Error::Error(ErrorKind kind, const std::string& message, std::size_t line)
    : std::runtime_error(decorate(kind, message, line)), kind_(kind), line_(line) {}

}  // namespace socbist
