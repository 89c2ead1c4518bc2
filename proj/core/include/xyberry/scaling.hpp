#pragma once

// Criticality signatures: minimum-gap sweeps towards a critical manifold,
// power-law fits of gap ~ |g - g_c|^{z nu}, and location of the step in the
// relative phase that marks the boundary |lambda| = 1 - gamma^2.

#include <iosfwd>
#include <optional>
#include <vector>

#include "xyberry/grid.hpp"

namespace xyberry {

/// inf_{q in (0, pi)} gap(q) for the infinite chain. Closed form: gap^2 is a
/// quadratic in c = cos q, minimised over c in [-1, 1].
double continuum_min_gap(double lambda, double gamma);

/// Minimum of gap(q) over the finite-N momentum grid.
double finite_min_gap(double lambda, double gamma, int n_sites);

enum class HeldParameter { Lambda, Gamma };

struct Window {
  double lo = 1e-3;
  double hi = 1e-1;
};

/// Sweep of the free parameter g = g_c + side * offset, offsets log-spaced
/// over `offsets`. The other parameter is held at `held_value`.
struct SweepSpec {
  HeldParameter held = HeldParameter::Gamma;
  double held_value = 1.0;
  double g_c = 1.0;
  int side = -1;  // -1 approaches from below, +1 from above
  Window offsets;
  int samples = 40;
  std::optional<int> n_sites;  // nullopt: continuum

  static SweepSpec ising(Window window = {}, int samples = 40);  // gamma = 1, lambda -> 1-
  static SweepSpec xx(double lambda = 0.5, Window window = {}, int samples = 40);  // gamma -> 0+
};

struct GapSample {
  double g = 0.0;
  double min_gap = 0.0;
};

/// Throws Error(InvalidArgument) for fewer than 8 samples or a sample on a
/// critical manifold.
std::vector<GapSample> gap_sweep(const SweepSpec& spec);

struct ExponentFit {
  double exponent = 0.0;
  double intercept = 0.0;  // log(gap) at log|g - g_c| = 0
  double r_squared = 0.0;
  Window window;
  int points = 0;
};

/// Least-squares slope of log(gap) against log|g - g_c| over samples with
/// |g - g_c| inside window (inclusive). Needs >= 6 points, all with gap > 0.
ExponentFit fit_exponent(const std::vector<GapSample>& table, double g_c, Window window);

/// CSV: g,min_gap
void write_gap_csv(std::ostream& os, const std::vector<GapSample>& table);

// ---- step detection ------------------------------------------------------

struct PhaseTracePoint {
  double lambda = 0.0;
  double phi_eg = 0.0;
};

/// Relative phase along a lambda grid at fixed gamma: the thermodynamic closed
/// form when n_sites is empty, else the finite-N minimum-gap mode.
/// Critical points are skipped.
std::vector<PhaseTracePoint> relative_phase_trace(double gamma, const std::vector<double>& lambdas,
                                                  std::optional<int> n_sites = std::nullopt);

enum class StepCriterion {
  PlateauOnset,  // first grid interval where the wrapped phase enters/leaves |phi| <= plateau_tol
  HalfStep,      // first grid interval where |wrapped phi| crosses pi/2
};

struct StepOptions {
  StepCriterion criterion = StepCriterion::PlateauOnset;
  double plateau_tol = 1e-9;
};

struct StepLocation {
  double lambda_star = 0.0;  // midpoint of the bracketing interval
  double lower = 0.0;
  double upper = 0.0;
};

/// Needs a strictly increasing lambda grid. Throws Error(Detection) when the
/// trace never changes state.
StepLocation step_detect(const std::vector<PhaseTracePoint>& trace, const StepOptions& options = {});

struct StepTraceRow {
  double gamma = 0.0;
  double lambda_star = 0.0;
};

/// CSV: gamma,lambda_star
void write_step_csv(std::ostream& os, const std::vector<StepTraceRow>& rows);

}  // namespace xyberry
