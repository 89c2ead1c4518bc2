#include "xyberry/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "xyberry/berry.hpp"
#include "xyberry/errors.hpp"
#include "xyberry/model.hpp"

namespace xyberry {

double continuum_min_gap(double lambda, double gamma) {
  // gap^2(c) = (1 - g^2) c^2 - 2 lambda c + lambda^2 + g^2,  c = cos q in [-1, 1].
  const double g2 = gamma * gamma;
  const double a = 1.0 - g2;
  auto gap2 = [&](double c) { return (c - lambda) * (c - lambda) + g2 * (1.0 - c * c); };
  double best = std::min(gap2(-1.0), gap2(1.0));
  if (a > 0.0) {
    const double c = std::clamp(lambda / a, -1.0, 1.0);
    best = std::min(best, gap2(c));
  }
  return std::sqrt(std::max(0.0, best));
}

double finite_min_gap(double lambda, double gamma, int n_sites) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : mode_momenta(n_sites)) {
    best = std::min(best, mode_angles(m.q, lambda, gamma).gap);
  }
  return best;
}

SweepSpec SweepSpec::ising(Window window, int samples) {
  SweepSpec s;
  s.held = HeldParameter::Gamma;
  s.held_value = 1.0;
  s.g_c = 1.0;
  s.side = -1;
  s.offsets = window;
  s.samples = samples;
  return s;
}

SweepSpec SweepSpec::xx(double lambda, Window window, int samples) {
  SweepSpec s;
  s.held = HeldParameter::Lambda;
  s.held_value = lambda;
  s.g_c = 0.0;
  s.side = +1;
  s.offsets = window;
  s.samples = samples;
  return s;
}

std::vector<GapSample> gap_sweep(const SweepSpec& spec) {
  if (spec.samples < 8) {
    throw Error(ErrorKind::InvalidArgument, "gap sweep needs at least 8 samples");
  }
  if (!(spec.offsets.lo > 0.0) || !(spec.offsets.hi > spec.offsets.lo)) {
    throw Error(ErrorKind::InvalidArgument, "sweep offsets need 0 < lo < hi");
  }
  if (spec.side != 1 && spec.side != -1) {
    throw Error(ErrorKind::InvalidArgument, "sweep side must be +1 or -1");
  }
  const double log_lo = std::log(spec.offsets.lo);
  const double log_hi = std::log(spec.offsets.hi);
  std::vector<GapSample> out;
  out.reserve(static_cast<std::size_t>(spec.samples));
  for (int i = 0; i < spec.samples; ++i) {
    const double t = static_cast<double>(i) / (spec.samples - 1);
    const double offset = std::exp(log_lo + t * (log_hi - log_lo));
    const double g = spec.g_c + spec.side * offset;
    const double lambda = spec.held == HeldParameter::Gamma ? g : spec.held_value;
    const double gamma = spec.held == HeldParameter::Gamma ? spec.held_value : g;
    if (classify_criticality(lambda, gamma).tag != CriticalityTag::NonCritical) {
      throw Error(ErrorKind::InvalidArgument,
                  "sweep sample lies on a critical manifold (lambda=" + std::to_string(lambda) +
                      ", gamma=" + std::to_string(gamma) + ")");
    }
    const double gap = spec.n_sites ? finite_min_gap(lambda, gamma, *spec.n_sites)
                                    : continuum_min_gap(lambda, gamma);
    out.push_back({g, gap});
  }
  return out;
}

ExponentFit fit_exponent(const std::vector<GapSample>& table, double g_c, Window window) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = 0;
  for (const auto& s : table) {
    const double d = std::abs(s.g - g_c);
    if (d < window.lo * (1 - 1e-9) || d > window.hi * (1 + 1e-9)) continue;
    if (!(s.min_gap > 0.0)) {
      throw Error(ErrorKind::InvalidFit,
                  "nonpositive gap at g=" + std::to_string(s.g) + " inside the fit window");
    }
    const double x = std::log(d);
    const double y = std::log(s.min_gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++n;
  }
  if (n < 6) {
    throw Error(ErrorKind::InvalidFit,
                "fit window holds " + std::to_string(n) + " points; need at least 6");
  }
  const double mx = sx / n;
  const double my = sy / n;
  const double cxx = sxx / n - mx * mx;
  const double cxy = sxy / n - mx * my;
  const double cyy = syy / n - my * my;
  if (!(cxx > 0.0)) {
    throw Error(ErrorKind::InvalidFit, "fit window has no spread in |g - g_c|");
  }
  ExponentFit fit;
  fit.exponent = cxy / cxx;
  fit.intercept = my - fit.exponent * mx;
  fit.r_squared = cyy > 0.0 ? std::clamp(cxy * cxy / (cxx * cyy), 0.0, 1.0) : 1.0;
  fit.window = window;
  fit.points = n;
  return fit;
}

void write_gap_csv(std::ostream& os, const std::vector<GapSample>& table) {
  os << "g,min_gap\n";
  for (const auto& s : table) os << format_real(s.g) << ',' << format_real(s.min_gap) << '\n';
}

std::vector<PhaseTracePoint> relative_phase_trace(double gamma, const std::vector<double>& lambdas,
                                                  std::optional<int> n_sites) {
  std::vector<PhaseTracePoint> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    if (classify_criticality(lambda, gamma).tag != CriticalityTag::NonCritical) continue;
    try {
      const double phase = n_sites ? relative_phase_finite({lambda, gamma, 0.0, *n_sites}).value
                                   : relative_phase_thermo(lambda, gamma).value;
      out.push_back({lambda, phase});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CriticalPoint) throw;
    }
  }
  return out;
}

StepLocation step_detect(const std::vector<PhaseTracePoint>& trace, const StepOptions& options) {
  if (trace.size() < 2) {
    throw Error(ErrorKind::Detection, "step detection needs at least two points");
  }
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (!(trace[i].lambda > trace[i - 1].lambda)) {
      throw Error(ErrorKind::InvalidArgument, "lambda grid must be strictly increasing");
    }
  }
  auto state = [&](double phase) {
    const double w = std::abs(wrap_phase(phase));
    return options.criterion == StepCriterion::HalfStep ? w > std::numbers::pi / 2.0
                                                        : w > options.plateau_tol;
  };
  bool prev = state(trace.front().phi_eg);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const bool cur = state(trace[i].phi_eg);
    if (cur != prev) {
      const double lo = trace[i - 1].lambda;
      const double hi = trace[i].lambda;
      return {0.5 * (lo + hi), lo, hi};
    }
    prev = cur;
  }
  throw Error(ErrorKind::Detection, "relative phase shows no step on this grid");
}

void write_step_csv(std::ostream& os, const std::vector<StepTraceRow>& rows) {
  os << "gamma,lambda_star\n";
  for (const auto& r : rows) os << format_real(r.gamma) << ',' << format_real(r.lambda_star) << '\n';
}

}  // namespace xyberry
