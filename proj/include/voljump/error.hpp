#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace voljump {

enum class ErrorKind {
  InvalidParameter,
  OutOfWindow,
  QuadratureFailure,
  SeriesTooShort,
  EmptyWindow,
  DegenerateFit,
  InsufficientOverlap,
  MisalignedCalendars,
  WindowUnderflow,
  OptimizerFailure,
  BoundsViolation,
  Infeasible,
  ParseError,
  NonPositivePrice,
  NonMonotoneDates,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the toolkit carries a kind so callers (the CLI in
/// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Quadrature and optimizer failures are numerical; everything else is an
  /// input or configuration problem.
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::QuadratureFailure ||
           kind_ == ErrorKind::OptimizerFailure;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace voljump
