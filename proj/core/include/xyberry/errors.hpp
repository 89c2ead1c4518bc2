#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xyberry {

enum class ErrorKind {
  InvalidArgument,
  CriticalPoint,   // phase or observable requested on a degenerate manifold
  Tracking,        // eigenstate tracking lost along a loop (gap closed)
  Discretization,  // loop too coarse: consecutive overlaps too small
  Resource,        // dense ED cap exceeded
  Numeric,         // eigensolver failure
  Domain,          // closed form evaluated outside its branch
  Infeasible,      // lattice targets cannot be realized
  DegenerateConfig,
  Detection,       // no step found in a phase trace
  InvalidFit,
};

/// Machine-readable name used in CLI error JSON ("critical-point", ...).
std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a loop cannot be tracked; carries the offending loop step.
class TrackingError : public Error {
 public:
  TrackingError(ErrorKind kind, const std::string& what, int step, double phi)
      : Error(kind, what), step_(step), phi_(phi) {}

  int step() const noexcept { return step_; }
  double phi() const noexcept { return phi_; }

 private:
  int step_;
  double phi_;
};

}  // namespace xyberry
