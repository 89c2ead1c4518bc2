#pragma once

// Geometric phases as vacuum expectation values.
//
// A loop generated by U(lambda T) = exp(-i lambda T O) that returns the
// ground state to itself carries the phase  phi = lambda T <psi|O|psi>.
// For the XY chain the phi-loop is generated by the total magnetization, which
// turns the ground-state phase into an order parameter:
//
//   phi_g = pi N_f = pi (N + M_z) / 2,   N_f = sum_{q>0} (1 - cos theta_q).

#include <string>

#include "xyberry/model.hpp"

namespace xyberry {

/// Jordan-Wigner convention: sz_l = 2 n_l - 1, an occupied mode is spin up.
inline constexpr double kOccupiedSpinSign = +1.0;

struct CyclicGeneratorSpec {
  double lambda_t = 0.0;
  std::string description;
};

/// phase / lambda_T. Throws Error(InvalidArgument) for lambda_T == 0.
double expectation_from_phase(double phase, const CyclicGeneratorSpec& spec);

/// sum_{q>0} (1 - cos theta_q): expected number of Jordan-Wigner fermions.
double fermion_occupation(const XYParams& params, double tol = kDefaultCriticalTol);

/// <sum_l sz_l> on the paired ground state.
double magnetization_analytic(const XYParams& params, double tol = kDefaultCriticalTol);

struct PhaseIdentity {
  double lhs = 0.0;  // ground_phase value
  double rhs = 0.0;  // pi (N + M_z) / 2
};

PhaseIdentity phase_magnetization_identity(const XYParams& params,
                                           double tol = kDefaultCriticalTol);

}  // namespace xyberry
