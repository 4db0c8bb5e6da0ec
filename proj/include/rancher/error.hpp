#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rancher {

enum class ErrorKind {
  DegenerateLine,
  InteriorInsertion,
  NotOnBoundary,
  InternalError,
  DegenerateFrame,
  QuadratureFailure,
  ModeMismatch,
  InsufficientData,
  InvalidArgument,
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DegenerateLine: return "DegenerateLine";
    case ErrorKind::InteriorInsertion: return "InteriorInsertion";
    case ErrorKind::NotOnBoundary: return "NotOnBoundary";
    case ErrorKind::InternalError: return "InternalError";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rancher
