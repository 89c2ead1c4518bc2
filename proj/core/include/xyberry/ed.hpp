#pragma once

// Exact-diagonalization oracle for small rings.
//
// Basis: site 0 is the most significant bit, bit value 0 = spin up (sz = +1).
// The chain Hamiltonian commutes with the parity P = prod_l sz_l; the paired
// (BCS-like) ground state of the mode solution lives in the P = +1 sector,
// which is therefore the default sector of every oracle quantity. The full
// spectrum can still be requested; inside lambda^2 + gamma^2 < 1 its lowest
// state alternates between sectors at finite N.

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "xyberry/berry.hpp"
#include "xyberry/model.hpp"

namespace xyberry::ed {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct Limits {
  int max_sites = 10;  // 2^10 = 1024 dense dimension
};

enum class RotationMethod {
  Conjugation,       // U(phi) H U(phi)^+ with U diagonal in the sz basis
  RotatedCouplings,  // sx, sy replaced by their in-plane rotations
};

enum class ParitySector { Full, Even, Odd };

class DenseOperator {
 public:
  DenseOperator(int n_sites, Matrix matrix);

  int n_sites() const noexcept { return n_sites_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  const Matrix& matrix() const noexcept { return matrix_; }

  /// max |H - H^+| over entries.
  double hermiticity_error() const;

 private:
  int n_sites_;
  Matrix matrix_;
};

/// Periodic ring, literal bond sum l = 0..N-1 (N = 2 counts its bond twice).
/// Throws Error(Resource) when n_sites exceeds limits.max_sites.
DenseOperator build_hamiltonian(const XYParams& params,
                                RotationMethod method = RotationMethod::Conjugation,
                                Limits limits = {});

/// Diagonal of sum_l sz_l.
Eigen::VectorXd total_sz_diagonal(int n_sites);

/// Basis indices belonging to a parity sector.
std::vector<Eigen::Index> sector_indices(int n_sites, ParitySector sector);

struct EigenPair {
  double value = 0.0;
  Vector vector;  // unit norm, largest-magnitude component real positive
};

struct LowSpectrum {
  std::vector<EigenPair> states;  // ascending
  bool degenerate = false;        // two lowest within degeneracy_tol
  double splitting = 0.0;         // E1 - E0 (infinity if count == 1 and dim == 1)
};

/// Dense Hermitian eigensolve. Vectors are returned in the full 2^N basis
/// even when a sector is selected.
LowSpectrum lowest_states(const DenseOperator& h, int count,
                          ParitySector sector = ParitySector::Full,
                          double degeneracy_tol = 1e-9);
LowSpectrum lowest_states(const Matrix& h, int count, double degeneracy_tol = 1e-9);

/// All eigenvalues of a sector, ascending.
Eigen::VectorXd spectrum(const DenseOperator& h, ParitySector sector = ParitySector::Full);

// ---- loops ---------------------------------------------------------------

/// Closed loop phi_j = start + j * period / steps, j = 0..steps-1; the state
/// at phi = start + period is identified with the start state.
struct LoopDiscretization {
  int steps = 2000;
  double start = 0.0;
  double period = 3.14159265358979323846;

  std::vector<double> phis() const;
};

using HamiltonianFamily = std::function<Matrix(double)>;

struct TrackOptions {
  int level = 0;
  double gap_tol = 1e-8;      // ground level: throw when the gap closes
  double flag_splitting = 1e-8;
  double min_overlap = 0.5;
};

struct LoopTrace {
  std::vector<double> phis;
  std::vector<Vector> states;
  std::vector<double> energies;
  double min_gap = 0.0;      // smallest separation from a neighbouring level
  double min_overlap = 1.0;  // smallest |<psi_j|psi_{j+1}>|
  bool near_degenerate = false;
};

/// Diagonalizes the family along the loop and follows one level by maximal
/// overlap with the previous step.
LoopTrace trace_loop(const HamiltonianFamily& family, const LoopDiscretization& loop,
                     const TrackOptions& options = {});

/// Sign of the overlap-product phase: phase = kLoopPhaseSign * arg prod_j <psi_j|psi_{j+1}>.
/// +1 reproduces sum_q pi (1 - cos theta_q) for the chain ground state and
/// +Omega/2 for the upper spin-1/2 level.
inline constexpr double kLoopPhaseSign = +1.0;

/// Consecutive overlaps of a closed loop (the last one returns to states[0]).
std::vector<std::complex<double>> loop_overlaps(std::span<const Vector> states);

/// Gauge-invariant phase of a closed loop of states, in (-pi, pi].
double pancharatnam_phase(std::span<const Vector> states);

/// CSV: phi,overlap_re,overlap_im,cumulative_phase
void write_loop_trace_csv(std::ostream& os, const LoopTrace& trace);

/// H(phi) of the chain restricted to a sector (dimension of the sector).
HamiltonianFamily xy_family(const XYParams& base, ParitySector sector = ParitySector::Even,
                            Limits limits = {});

/// H(phi) = (1/2) B(theta, phi).sigma with |B| = 1.
HamiltonianFamily spin_half_family(double theta);

enum class Level { Ground, Excited };

struct LoopPhaseOptions {
  ParitySector sector = ParitySector::Even;
  double gap_tol = 1e-8;
  int windings = 1;
  Limits limits;
};

struct LoopPhaseResult {
  PhaseResult phase;
  bool near_degenerate = false;
  double min_gap = 0.0;
  double min_overlap = 1.0;
};

/// Overlap-product phase of one level of H(phi) over phi: params.phi -> params.phi + pi.
/// `loop.start` and `loop.period` are overridden by the chain's loop.
LoopPhaseResult discrete_loop_phase(const XYParams& params, Level level,
                                    LoopDiscretization loop,
                                    const LoopPhaseOptions& options = {});

/// Overlap-product phase of a traced loop with multiple windings.
PhaseResult phase_from_trace(const LoopTrace& trace, int windings = 1);

struct Observable {
  double value = 0.0;
  bool degenerate = false;
};

Observable ground_energy_ed(const XYParams& params, ParitySector sector = ParitySector::Even,
                            Limits limits = {});

/// <sum_l sz_l> on the ED ground vector of the sector.
Observable magnetization_ed(const XYParams& params, ParitySector sector = ParitySector::Even,
                            Limits limits = {});

}  // namespace xyberry::ed
