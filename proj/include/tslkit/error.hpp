#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tslkit {

enum class ErrorKind {
  // spec text
  SyntaxError,
  UndefinedName,
  RecursiveMacro,
  WrongMacroArity,
  ArityConflict,
  RoleConflict,
  // evaluation
  UnboundLiteral,
  ArityMismatch,
  MissingSignal,
  NotBoolean,
  TypeMismatch,
  MissingFired,
  // control flow models
  SchemaError,
  CycleDetected,
  InvalidCfm,
  MutexNotOneHot,
  SelectorOutOfRange,
  // conformance / io
  MissingGenerator,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

/// Error raised while reading specification text; carries a 1-based position.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorKind kind, const std::string& message, std::size_t line,
              std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Error raised while running a trace, attributed to the step that failed.
class StepError : public Error {
 public:
  StepError(ErrorKind kind, const std::string& message, std::size_t step);

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace tslkit
