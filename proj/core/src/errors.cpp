#include "xyberry/errors.hpp"

namespace xyberry {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::CriticalPoint: return "critical-point";
    case ErrorKind::Tracking: return "tracking";
    case ErrorKind::Discretization: return "discretization";
    case ErrorKind::Resource: return "resource";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::DegenerateConfig: return "degenerate-configuration";
    case ErrorKind::Detection: return "detection";
    case ErrorKind::InvalidFit: return "invalid-fit";
  }
  return "unknown";
}

}  // namespace xyberry
