#include "xyberry/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xyberry/errors.hpp"

namespace xyberry {

namespace {

void validate(const LatticeParams& lp) {
  const double fields[] = {lp.j_a, lp.j_b, lp.j_c, lp.u_ab, lp.omega, lp.delta, lp.phase};
  for (double f : fields) {
    if (!std::isfinite(f)) throw Error(ErrorKind::InvalidArgument, "lattice parameters must be finite");
  }
  if (lp.j_a < 0.0 || lp.j_b < 0.0 || lp.j_c < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "tunnelling couplings must be >= 0");
  }
  if (lp.omega < 0.0) throw Error(ErrorKind::InvalidArgument, "omega must be >= 0");
  if (!(lp.u_ab > 0.0)) throw Error(ErrorKind::InvalidArgument, "u_ab must be > 0");
  if (lp.delta == 0.0) throw Error(ErrorKind::InvalidArgument, "delta must be nonzero");
}

}  // namespace

EffectiveParams effective_xy(const LatticeParams& lp) {
  validate(lp);
  EffectiveParams e;
  e.energy_scale = (2.0 * lp.j_a * lp.j_b + 0.5 * lp.j_c * lp.j_c) / lp.u_ab;
  if (!(e.energy_scale > 0.0)) {
    throw Error(ErrorKind::DegenerateConfig,
                "zero energy scale: no exchange without tunnelling (j_a j_b = j_c = 0)");
  }
  e.gamma = lp.j_c * lp.j_c / (2.0 * e.energy_scale * lp.u_ab);
  e.lambda_raw = lp.omega * lp.omega / lp.delta;
  e.lambda = e.lambda_raw / e.energy_scale;
  e.phi = reduce_mod_pi(lp.phase);
  return e;
}

LatticeParams solve_for_targets(double target_gamma, double target_lambda,
                                const TargetConstraints& constraints) {
  if (!(target_gamma > 0.0 && target_gamma <= 1.0)) {
    throw Error(ErrorKind::Infeasible,
                "gamma = " + std::to_string(target_gamma) +
                    " unreachable: j_a = j_b couplings give gamma in (0, 1]");
  }
  if (!std::isfinite(target_lambda)) {
    throw Error(ErrorKind::InvalidArgument, "target lambda must be finite");
  }
  if (!(constraints.u_ab > 0.0) || constraints.delta == 0.0 || !(constraints.j_c > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "constraints need u_ab > 0, delta != 0, j_c > 0");
  }
  if (target_lambda * constraints.delta < 0.0) {
    throw Error(ErrorKind::Infeasible,
                "lambda and delta must share a sign (Omega^2 >= 0)");
  }
  LatticeParams lp;
  lp.u_ab = constraints.u_ab;
  lp.delta = constraints.delta;
  lp.j_c = constraints.j_c;
  const double j = constraints.j_c * std::sqrt((1.0 - target_gamma) / (4.0 * target_gamma));
  lp.j_a = j;
  lp.j_b = j;
  const double energy_scale = (2.0 * j * j + 0.5 * lp.j_c * lp.j_c) / lp.u_ab;
  lp.omega = std::sqrt(target_lambda * constraints.delta * energy_scale);
  return lp;
}

MottCheck mott_regime_check(const LatticeParams& lp, double threshold) {
  if (!(threshold > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "Mott threshold must be positive");
  }
  validate(lp);
  MottCheck c;
  c.threshold = threshold;
  c.margin = std::max({lp.j_a, lp.j_b, lp.j_c}) / lp.u_ab;
  c.pass = c.margin < threshold;
  return c;
}

}  // namespace xyberry
