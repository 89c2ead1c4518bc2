#pragma once

// Closed-form geometric phases.
//
// All XY phases are for one circuit phi: 0 -> pi of H(phi); since H(phi) is
// pi-periodic this closes the loop, and every Bloch vector (2 phi, theta_q)
// makes one full turn about z. `windings` multiplies the whole result.

#include <iosfwd>
#include <string>
#include <vector>

#include "xyberry/grid.hpp"
#include "xyberry/model.hpp"

namespace xyberry {

/// Reduces an angle into (-pi, pi].
double wrap_phase(double value);

struct PhaseResult {
  double value = 0.0;    // unwrapped
  double wrapped = 0.0;  // value mod 2 pi, in (-pi, pi]
  double topological_part = 0.0;
  double geometric_part = 0.0;
  int winding = 1;
  bool decomposed = false;  // true only on the nontrivial thermodynamic branch

  /// Phase with no topological/geometric split (geometric_part = value).
  static PhaseResult plain(double value, int winding = 1);
};

// ---- spin-1/2 reference --------------------------------------------------

struct BerryConnection {
  double a_theta = 0.0;
  double a_phi = 0.0;
};

/// Connection of the |+> state of B(theta, phi).sigma: (0, (1 - cos theta)/2).
BerryConnection spin_half_connection(double theta);

struct BlochLoopSpec {
  double theta = 0.0;  // polar angle of the field, [0, pi]
  int windings = 1;
};

enum class SpinBranch { Plus, Minus };

/// n * Omega / 2 = n pi (1 - cos theta) for |+>; the negation for |->.
PhaseResult spin_half_phase(const BlochLoopSpec& spec, SpinBranch branch = SpinBranch::Plus);

// ---- XY chain ------------------------------------------------------------

/// sum_{q>0} pi (1 - cos theta_q). Throws Error(CriticalPoint) at degeneracy.
PhaseResult ground_phase(const XYParams& params, int windings = 1,
                         double tol = kDefaultCriticalTol);

/// -pi (1 - cos theta_{q0}) with q0 the minimum-gap mode.
PhaseResult relative_phase_finite(const XYParams& params, int windings = 1,
                                  double tol = kDefaultCriticalTol);

/// ground_phase + relative_phase_finite. Depends on which single-particle
/// excitation is called "the" first excited state; prefer the relative phase.
PhaseResult excited_phase(const XYParams& params, int windings = 1,
                          double tol = kDefaultCriticalTol);

/// N -> infinity limit of the relative phase:
///   0                                                 for |lambda| > 1 - g^2
///   -pi + pi lambda |g| / sqrt((1 - g^2)(1 - g^2 - lambda^2))  otherwise
/// On the second branch topological_part = -n pi and the remainder is
/// geometric. Throws Error(CriticalPoint) on the XX line.
PhaseResult relative_phase_thermo(double lambda, double gamma, int windings = 1,
                                  double tol = kDefaultCriticalTol);

// ---- phase surface -------------------------------------------------------

struct SurfaceGrid {
  Range lambda;
  Range gamma;
};

enum class RowStatus { Ok, Critical };

struct SurfaceRow {
  double lambda = 0.0;
  double gamma = 0.0;
  double phi_g_raw = 0.0;
  double phi_g_wrapped = 0.0;
  double phi_eg = 0.0;  // unwrapped relative phase, in [-2 pi, 0]
  RowStatus status = RowStatus::Ok;
};

/// Row-major over (gamma outer, lambda inner). Points within `margin` of a
/// critical manifold get status Critical and NaN phases.
std::vector<SurfaceRow> phase_surface(const SurfaceGrid& grid, int n_sites,
                                      double margin = kDefaultCriticalTol);

/// CSV: lambda,gamma,phi_g_raw,phi_g_wrapped,phi_eg,status
void write_surface_csv(std::ostream& os, const std::vector<SurfaceRow>& rows);

/// 12 significant digits, "nan" for non-finite, no negative zero.
std::string format_real(double value);

}  // namespace xyberry
