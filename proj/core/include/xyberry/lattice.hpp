#pragma once

// Two-species atoms in a 1D optical lattice, deep in the Mott regime, realise
// the rotated XY chain with
//
//   energy_scale = (2 J_a J_b + J_c^2 / 2) / U_ab
//   gamma        = J_c^2 / (2 energy_scale U_ab)
//   lambda       = (Omega^2 / Delta) / energy_scale
//   phi          = laser phase difference mod pi
//
// lambda is reported in units of energy_scale so EffectiveParams plugs
// straight into XYParams; the raw Omega^2 / Delta is kept alongside.

#include "xyberry/model.hpp"

namespace xyberry {

struct LatticeParams {
  double j_a = 0.0;
  double j_b = 0.0;
  double j_c = 0.0;
  double u_ab = 1.0;
  double omega = 0.0;
  double delta = 1.0;
  double phase = 0.0;
};

struct EffectiveParams {
  double gamma = 0.0;
  double lambda = 0.0;
  double lambda_raw = 0.0;  // Omega^2 / Delta, lattice energy units
  double phi = 0.0;
  double energy_scale = 0.0;

  XYParams to_xy(int n_sites) const { return XYParams::make(lambda, gamma, phi, n_sites); }
};

EffectiveParams effective_xy(const LatticeParams& lp);

struct TargetConstraints {
  double u_ab = 1.0;
  double delta = 1.0;
  double j_c = 0.1;  // sets the tunnelling scale; j_a = j_b follow from gamma
};

/// Inverse map with j_a = j_b = j:  j^2 = j_c^2 (1 - gamma) / (4 gamma),
/// Omega^2 = lambda * Delta * energy_scale.
/// Throws Error(Infeasible) for gamma outside (0, 1] or lambda * Delta < 0.
LatticeParams solve_for_targets(double target_gamma, double target_lambda,
                                const TargetConstraints& constraints = {});

struct MottCheck {
  bool pass = false;
  double margin = 0.0;  // max(j_a, j_b, j_c) / u_ab
  double threshold = 0.1;
};

/// Passes iff max(j) / u_ab < threshold (strict).
MottCheck mott_regime_check(const LatticeParams& lp, double threshold = 0.1);

}  // namespace xyberry
