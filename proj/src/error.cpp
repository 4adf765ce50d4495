#include "tslkit/error.hpp"

namespace tslkit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UndefinedName: return "UndefinedName";
    case ErrorKind::RecursiveMacro: return "RecursiveMacro";
    case ErrorKind::WrongMacroArity: return "WrongMacroArity";
    case ErrorKind::ArityConflict: return "ArityConflict";
    case ErrorKind::RoleConflict: return "RoleConflict";
    case ErrorKind::UnboundLiteral: return "UnboundLiteral";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::MissingSignal: return "MissingSignal";
    case ErrorKind::NotBoolean: return "NotBoolean";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::MissingFired: return "MissingFired";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::InvalidCfm: return "InvalidCfm";
    case ErrorKind::MutexNotOneHot: return "MutexNotOneHot";
    case ErrorKind::SelectorOutOfRange: return "SelectorOutOfRange";
    case ErrorKind::MissingGenerator: return "MissingGenerator";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

SyntaxError::SyntaxError(ErrorKind kind, const std::string& message, std::size_t line,
                         std::size_t column)
    : Error(kind, message + " at " + std::to_string(line) + ":" + std::to_string(column)),
      line_(line),
      column_(column) {}

StepError::StepError(ErrorKind kind, const std::string& message, std::size_t step)
    : Error(kind, message + " (step " + std::to_string(step) + ")"), step_(step) {}

}  // namespace tslkit
