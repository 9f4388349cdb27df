#include "voljump/error.hpp"

namespace voljump {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::OutOfWindow: return "out-of-window";
    case ErrorKind::QuadratureFailure: return "quadrature-failure";
    case ErrorKind::SeriesTooShort: return "series-too-short";
    case ErrorKind::EmptyWindow: return "empty-window";
    case ErrorKind::DegenerateFit: return "degenerate-fit";
    case ErrorKind::InsufficientOverlap: return "insufficient-overlap";
    case ErrorKind::MisalignedCalendars: return "misaligned-calendars";
    case ErrorKind::WindowUnderflow: return "window-underflow";
    case ErrorKind::OptimizerFailure: return "optimizer-failure";
    case ErrorKind::BoundsViolation: return "bounds-violation";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::NonPositivePrice: return "non-positive-price";
    case ErrorKind::NonMonotoneDates: return "non-monotone-dates";
    case ErrorKind::ConfigError: return "config-error";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace voljump
