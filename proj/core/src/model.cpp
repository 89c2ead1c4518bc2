#include "xyberry/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "xyberry/errors.hpp"

namespace xyberry {

namespace {

constexpr double kPi = std::numbers::pi;

void require_even_sites(int n_sites, int min_sites) {
  if (n_sites < min_sites || n_sites % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument,
                "n_sites must be even and >= " + std::to_string(min_sites) +
                    " (modes pair q with -q); got " + std::to_string(n_sites));
  }
}

}  // namespace

double reduce_mod_pi(double angle) {
  double r = std::fmod(angle, kPi);
  if (r < 0.0) r += kPi;
  if (r >= kPi) r = 0.0;
  return r;
}

XYParams XYParams::make(double lambda, double gamma, double phi, int n_sites) {
  XYParams p{lambda, gamma, reduce_mod_pi(phi), n_sites};
  validate(p);
  return p;
}

void validate(const XYParams& params, int min_sites) {
  require_even_sites(params.n_sites, min_sites);
  if (!std::isfinite(params.lambda) || !std::isfinite(params.gamma) ||
      !std::isfinite(params.phi)) {
    throw Error(ErrorKind::InvalidArgument, "XY parameters must be finite");
  }
}

std::vector<MomentumMode> mode_momenta(int n_sites) {
  require_even_sites(n_sites, 4);
  const int half = n_sites / 2;
  std::vector<MomentumMode> modes;
  modes.reserve(static_cast<std::size_t>(half));
  for (int m = 0; m < half; ++m) {
    modes.push_back({m, 2.0 * kPi * (m + 0.5) / n_sites});
  }
  return modes;
}

ModeAngles mode_angles(double q, double lambda, double gamma) {
  ModeAngles a;
  a.epsilon = std::cos(q) - lambda;
  const double pairing = gamma * std::sin(q);
  a.gap = std::hypot(a.epsilon, pairing);
  if (a.gap == 0.0) {
    a.theta = kPi / 2.0;
    a.cos_theta = 0.0;
  } else {
    a.theta = std::atan2(std::abs(pairing), a.epsilon);
    a.cos_theta = a.epsilon / a.gap;
  }
  return a;
}

ModeAngles mode_angles(double q, const XYParams& params) {
  return mode_angles(q, params.lambda, params.gamma);
}

GapMode min_gap_mode(const XYParams& params) {
  validate(params);
  const auto modes = mode_momenta(params.n_sites);
  GapMode best{modes.front(), mode_angles(modes.front().q, params)};
  for (std::size_t i = 1; i < modes.size(); ++i) {
    const ModeAngles a = mode_angles(modes[i].q, params);
    // Mirror-symmetric modes tie up to roundoff; keep the smaller q.
    if (a.gap < best.angles.gap * (1.0 - 1e-12)) best = {modes[i], a};
  }
  return best;
}

double ground_energy(const XYParams& params) {
  validate(params);
  double sum = 0.0;
  for (const auto& m : mode_momenta(params.n_sites)) {
    sum += mode_angles(m.q, params).gap;
  }
  return -kModeEnergyScale * sum;
}

CriticalityClass classify_criticality(double lambda, double gamma, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "criticality tolerance must be positive");
  }
  const double to_ising = std::abs(std::abs(lambda) - 1.0);
  const double to_xx = std::abs(lambda) < 1.0
                           ? std::abs(gamma)
                           : std::numeric_limits<double>::infinity();
  CriticalityClass c;
  c.distance = std::min(to_ising, to_xx);
  if (to_ising <= tol) {
    c.tag = CriticalityTag::IsingPlane;
  } else if (std::abs(gamma) <= tol && std::abs(lambda) < 1.0) {
    c.tag = CriticalityTag::XXLine;
  } else {
    c.tag = CriticalityTag::NonCritical;
  }
  return c;
}

const char* to_string(CriticalityTag tag) noexcept {
  switch (tag) {
    case CriticalityTag::XXLine: return "xx-line";
    case CriticalityTag::IsingPlane: return "ising-plane";
    case CriticalityTag::NonCritical: return "noncritical";
  }
  return "unknown";
}

void require_noncritical(const XYParams& params, double tol) {
  const auto c = classify_criticality(params.lambda, params.gamma, tol);
  if (c.tag != CriticalityTag::NonCritical) {
    throw Error(ErrorKind::CriticalPoint,
                std::string("geometric phase undefined on the ") + to_string(c.tag) +
                    " (lambda=" + std::to_string(params.lambda) +
                    ", gamma=" + std::to_string(params.gamma) + ")");
  }
  const auto g = min_gap_mode(params);
  if (g.angles.gap < tol) {
    throw Error(ErrorKind::CriticalPoint,
                "finite-size gap closes at q=" + std::to_string(g.mode.q));
  }
}

}  // namespace xyberry
