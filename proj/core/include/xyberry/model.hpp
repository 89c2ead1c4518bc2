#pragma once

// Momentum-mode solution of the rotated XY chain
//
//   H(phi) = U(phi) H U(phi)^+,
//   H      = -sum_l [ (1+g)/2 sx_l sx_{l+1} + (1-g)/2 sy_l sy_{l+1} + lambda sz_l ],
//   U(phi) = prod_l exp(i sz_l phi / 2),
//
// on a periodic ring of even length N. After Jordan-Wigner and Bogoliubov
// rotations each pair (q, -q) is an independent two-level system with
//
//   eps(q) = cos q - lambda,   gap(q) = sqrt(eps^2 + g^2 sin^2 q),
//   cos theta(q) = eps / gap.
//
// Momenta sit on the half-odd-integer grid q_m = 2 pi (m + 1/2) / N, the
// even-fermion-parity sector that holds the paired ground state.

#include <numbers>
#include <utility>
#include <vector>

namespace xyberry {

inline constexpr double kDefaultCriticalTol = 1e-9;

/// Each Bogoliubov quasiparticle of the chain above costs kModeEnergyScale * gap(q).
/// Fixed by comparison with exact diagonalization (see ed.hpp).
inline constexpr double kModeEnergyScale = 2.0;

struct XYParams {
  double lambda = 0.0;
  double gamma = 0.0;
  double phi = 0.0;  // reduced into [0, pi)
  int n_sites = 4;

  /// Validated construction; reduces phi modulo pi.
  static XYParams make(double lambda, double gamma, double phi, int n_sites);
};

/// Throws Error(InvalidArgument) unless n_sites is even and >= min_sites and
/// all fields are finite.
void validate(const XYParams& params, int min_sites = 4);

/// Reduces an angle into [0, pi).
double reduce_mod_pi(double angle);

struct MomentumMode {
  int index = 0;
  double q = 0.0;
};

struct ModeAngles {
  double epsilon = 0.0;
  double gap = 0.0;
  double theta = 0.0;      // in [0, pi]
  double cos_theta = 1.0;  // eps / gap, computed directly to avoid acos roundoff
};

std::vector<MomentumMode> mode_momenta(int n_sites);

/// Total in q; at gap == 0 theta is pinned to pi/2.
ModeAngles mode_angles(double q, double lambda, double gamma);
ModeAngles mode_angles(double q, const XYParams& params);

struct GapMode {
  MomentumMode mode;
  ModeAngles angles;
};

/// Mode with the smallest gap; ties go to the smaller q.
GapMode min_gap_mode(const XYParams& params);

/// E_g = -kModeEnergyScale * sum_{q>0} gap(q). Independent of phi.
double ground_energy(const XYParams& params);

enum class CriticalityTag { XXLine, IsingPlane, NonCritical };

struct CriticalityClass {
  CriticalityTag tag = CriticalityTag::NonCritical;
  double distance = 0.0;  // to the nearest critical manifold in (lambda, gamma)
};

CriticalityClass classify_criticality(double lambda, double gamma,
                                      double tol = kDefaultCriticalTol);

const char* to_string(CriticalityTag tag) noexcept;

/// Throws Error(CriticalPoint) if params lie on a critical manifold or the
/// finite-N minimum gap is below tol.
void require_noncritical(const XYParams& params, double tol = kDefaultCriticalTol);

}  // namespace xyberry
