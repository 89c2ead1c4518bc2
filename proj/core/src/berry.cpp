#include "xyberry/berry.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "xyberry/errors.hpp"

namespace xyberry {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_windings(int windings) {
  if (windings < 1) {
    throw Error(ErrorKind::InvalidArgument, "winding number must be >= 1");
  }
}

}  // namespace

double wrap_phase(double value) {
  double r = std::remainder(value, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

PhaseResult PhaseResult::plain(double value, int winding) {
  PhaseResult p;
  p.value = value;
  p.wrapped = wrap_phase(value);
  p.topological_part = 0.0;
  p.geometric_part = value;
  p.winding = winding;
  return p;
}

BerryConnection spin_half_connection(double theta) {
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw Error(ErrorKind::InvalidArgument, "theta must lie in [0, pi]");
  }
  // sin(pi/2 - theta) is exactly 0 on the equator and exactly +-1 at the poles.
  return {0.0, 0.5 * (1.0 - std::sin(kPi / 2 - theta))};
}

PhaseResult spin_half_phase(const BlochLoopSpec& spec, SpinBranch branch) {
  require_windings(spec.windings);
  // One loop in phi of the connection: 2 pi * A_phi = Omega / 2.
  const double per_loop = kTwoPi * spin_half_connection(spec.theta).a_phi;
  const double sign = branch == SpinBranch::Plus ? 1.0 : -1.0;
  return PhaseResult::plain(sign * spec.windings * per_loop, spec.windings);
}

PhaseResult ground_phase(const XYParams& params, int windings, double tol) {
  require_windings(windings);
  validate(params);
  require_noncritical(params, tol);
  double sum = 0.0;
  for (const auto& m : mode_momenta(params.n_sites)) {
    sum += 1.0 - mode_angles(m.q, params).cos_theta;
  }
  return PhaseResult::plain(windings * kPi * sum, windings);
}

PhaseResult relative_phase_finite(const XYParams& params, int windings, double tol) {
  require_windings(windings);
  validate(params);
  require_noncritical(params, tol);
  const auto k0 = min_gap_mode(params);
  return PhaseResult::plain(-windings * kPi * (1.0 - k0.angles.cos_theta), windings);
}

PhaseResult excited_phase(const XYParams& params, int windings, double tol) {
  const auto g = ground_phase(params, windings, tol);
  const auto r = relative_phase_finite(params, windings, tol);
  return PhaseResult::plain(g.value + r.value, windings);
}

PhaseResult relative_phase_thermo(double lambda, double gamma, int windings, double tol) {
  require_windings(windings);
  if (!std::isfinite(lambda) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::InvalidArgument, "lambda and gamma must be finite");
  }
  if (classify_criticality(lambda, gamma, tol).tag == CriticalityTag::XXLine) {
    throw Error(ErrorKind::CriticalPoint,
                "relative phase undefined on the XX line (gamma = 0, |lambda| < 1)");
  }
  const double g2 = gamma * gamma;
  if (!(std::abs(lambda) < 1.0 - g2)) {
    return PhaseResult::plain(0.0, windings);
  }
  const double radicand = (1.0 - g2) * (1.0 - g2 - lambda * lambda);
  if (!(radicand > 0.0)) {
    throw Error(ErrorKind::Domain, "relative_phase_thermo: nonpositive radicand");
  }
  PhaseResult p;
  p.winding = windings;
  p.topological_part = -windings * kPi;
  p.geometric_part = windings * kPi * lambda * std::abs(gamma) / std::sqrt(radicand);
  p.value = p.topological_part + p.geometric_part;
  p.wrapped = wrap_phase(p.value);
  p.decomposed = true;
  return p;
}

std::vector<SurfaceRow> phase_surface(const SurfaceGrid& grid, int n_sites, double margin) {
  mode_momenta(n_sites);  // validates n_sites
  if (!(margin > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "critical margin must be positive");
  }
  const auto lambdas = grid.lambda.points();
  const auto gammas = grid.gamma.points();
  std::vector<SurfaceRow> rows;
  rows.reserve(lambdas.size() * gammas.size());
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (double gamma : gammas) {
    for (double lambda : lambdas) {
      SurfaceRow row{lambda, gamma, nan, nan, nan, RowStatus::Critical};
      const auto c = classify_criticality(lambda, gamma, margin);
      if (c.tag == CriticalityTag::NonCritical) {
        const XYParams p{lambda, gamma, 0.0, n_sites};
        try {
          const auto g = ground_phase(p, 1, margin);
          row.phi_g_raw = g.value;
          row.phi_g_wrapped = g.wrapped;
          row.phi_eg = relative_phase_finite(p, 1, margin).value;
          row.status = RowStatus::Ok;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::CriticalPoint) throw;
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_real(double value) {
  if (!std::isfinite(value)) return "nan";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_surface_csv(std::ostream& os, const std::vector<SurfaceRow>& rows) {
  os << "lambda,gamma,phi_g_raw,phi_g_wrapped,phi_eg,status\n";
  for (const auto& r : rows) {
    os << format_real(r.lambda) << ',' << format_real(r.gamma) << ','
       << format_real(r.phi_g_raw) << ',' << format_real(r.phi_g_wrapped) << ','
       << format_real(r.phi_eg) << ',' << (r.status == RowStatus::Ok ? "ok" : "critical")
       << '\n';
  }
}

}  // namespace xyberry
