#pragma once

#include <stdexcept>
#include <string>

namespace mdim {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  BudgetExceeded,
  CapExceeded,
  MeshTooCoarse,
  NotACover,
  DegenerateFit,
  Config,
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::BudgetExceeded: return "budget exceeded";
    case ErrorKind::CapExceeded: return "cap exceeded";
    case ErrorKind::MeshTooCoarse: return "mesh too coarse";
    case ErrorKind::NotACover: return "not a cover";
    case ErrorKind::DegenerateFit: return "degenerate fit";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "i/o";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Budget failures remember the requirement so callers can report it.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, double required, double budget, int depth = -1,
              ErrorKind kind = ErrorKind::BudgetExceeded)
      : Error(kind, what), required_(required), budget_(budget), depth_(depth) {}

  double required() const noexcept { return required_; }
  double budget() const noexcept { return budget_; }
  /// Depth n at which the enumeration failed, or -1 when not applicable.
  int depth() const noexcept { return depth_; }

 private:
  double required_;
  double budget_;
  int depth_;
};

inline void require(bool ok, const std::string& what, ErrorKind kind = ErrorKind::InvalidArgument) {
  if (!ok) throw Error(kind, what);
}

}  // namespace mdim
