#include "xyberry/observables.hpp"

#include <numbers>

#include "xyberry/berry.hpp"
#include "xyberry/errors.hpp"

namespace xyberry {

double expectation_from_phase(double phase, const CyclicGeneratorSpec& spec) {
  if (spec.lambda_t == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "lambda_T must be nonzero");
  }
  return phase / spec.lambda_t;
}

double fermion_occupation(const XYParams& params, double tol) {
  validate(params);
  require_noncritical(params, tol);
  double n_f = 0.0;
  for (const auto& m : mode_momenta(params.n_sites)) {
    n_f += 1.0 - mode_angles(m.q, params).cos_theta;
  }
  return n_f;
}

double magnetization_analytic(const XYParams& params, double tol) {
  const double n_f = fermion_occupation(params, tol);
  return kOccupiedSpinSign * (2.0 * n_f - params.n_sites);
}

PhaseIdentity phase_magnetization_identity(const XYParams& params, double tol) {
  PhaseIdentity id;
  id.lhs = ground_phase(params, 1, tol).value;
  // pi (N + M_z)/2 with M_z = 2 N_f - N.
  id.rhs = std::numbers::pi * (params.n_sites + magnetization_analytic(params, tol)) / 2.0;
  return id;
}

}  // namespace xyberry
