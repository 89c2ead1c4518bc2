#include "xyberry/ed.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "xyberry/errors.hpp"

namespace xyberry::ed {

namespace {

using cplx = std::complex<double>;
using Pauli = Eigen::Matrix2cd;

constexpr cplx kI{0.0, 1.0};

Pauli pauli_x() { return (Pauli() << 0, 1, 1, 0).finished(); }
Pauli pauli_y() { return (Pauli() << 0, -kI, kI, 0).finished(); }
Pauli pauli_z() { return (Pauli() << 1, 0, 0, -1).finished(); }

int bit_of(Eigen::Index state, int site, int n_sites) {
  return static_cast<int>((state >> (n_sites - 1 - site)) & 1);
}

Eigen::Index with_bit(Eigen::Index state, int site, int n_sites, int value) {
  const Eigen::Index mask = Eigen::Index{1} << (n_sites - 1 - site);
  return value ? (state | mask) : (state & ~mask);
}

// M += coef * A_l B_r, Kronecker placement of two single-site operators.
void add_two_site(Matrix& m, cplx coef, const Pauli& a, int l, const Pauli& b, int r,
                  int n_sites) {
  const Eigen::Index dim = m.rows();
  for (Eigen::Index s = 0; s < dim; ++s) {
    const int in_l = bit_of(s, l, n_sites);
    const int in_r = bit_of(s, r, n_sites);
    for (int out_l = 0; out_l < 2; ++out_l) {
      const cplx al = a(out_l, in_l);
      if (al == cplx{}) continue;
      for (int out_r = 0; out_r < 2; ++out_r) {
        const cplx br = b(out_r, in_r);
        if (br == cplx{}) continue;
        const Eigen::Index t = with_bit(with_bit(s, l, n_sites, out_l), r, n_sites, out_r);
        m(t, s) += coef * al * br;
      }
    }
  }
}

void add_one_site(Matrix& m, cplx coef, const Pauli& a, int l, int n_sites) {
  const Eigen::Index dim = m.rows();
  for (Eigen::Index s = 0; s < dim; ++s) {
    const int in_l = bit_of(s, l, n_sites);
    for (int out_l = 0; out_l < 2; ++out_l) {
      const cplx al = a(out_l, in_l);
      if (al == cplx{}) continue;
      m(with_bit(s, l, n_sites, out_l), s) += coef * al;
    }
  }
}

Matrix assemble(int n_sites, double lambda, double gamma, const Pauli& sx, const Pauli& sy) {
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Matrix h = Matrix::Zero(dim, dim);
  const Pauli sz = pauli_z();
  for (int l = 0; l < n_sites; ++l) {
    const int r = (l + 1) % n_sites;
    add_two_site(h, -0.5 * (1.0 + gamma), sx, l, sx, r, n_sites);
    add_two_site(h, -0.5 * (1.0 - gamma), sy, l, sy, r, n_sites);
    add_one_site(h, -lambda, sz, l, n_sites);
  }
  return h;
}

void check_limits(int n_sites, const Limits& limits) {
  if (n_sites > limits.max_sites) {
    throw Error(ErrorKind::Resource,
                "dense ED limited to " + std::to_string(limits.max_sites) +
                    " sites; requested " + std::to_string(n_sites) +
                    " (raise XYBERRY_MAX_N to override)");
  }
}

void fix_gauge(Vector& v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best_abs * (1.0 + 1e-12)) {
      best_abs = a;
      best = i;
    }
  }
  if (best_abs > 0.0) v *= std::conj(v[best]) / best_abs;
}

Eigen::SelfAdjointEigenSolver<Matrix> solve(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::Numeric,
                "Hermitian eigensolver failed to converge (dim=" + std::to_string(h.rows()) +
                    ")");
  }
  return es;
}

double operator_norm_bound(const Matrix& h) {
  // Max absolute row sum; bounds the spectral norm.
  return h.cwiseAbs().rowwise().sum().maxCoeff();
}

LowSpectrum extract(const Matrix& h, int count, double degeneracy_tol,
                    const std::vector<Eigen::Index>* embed, Eigen::Index full_dim) {
  if (count < 1 || count > h.rows()) {
    throw Error(ErrorKind::InvalidArgument,
                "requested " + std::to_string(count) + " states from dimension " +
                    std::to_string(h.rows()));
  }
  const auto es = solve(h);
  const double norm = std::max(1.0, operator_norm_bound(h));
  LowSpectrum out;
  out.states.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Vector local = es.eigenvectors().col(k);
    const double value = es.eigenvalues()[k];
    const double residual = (h * local - value * local).norm();
    if (residual > 1e-9 * norm) {
      throw Error(ErrorKind::Numeric,
                  "eigenpair residual " + std::to_string(residual) + " exceeds tolerance");
    }
    fix_gauge(local);
    Vector full;
    if (embed) {
      full = Vector::Zero(full_dim);
      for (std::size_t i = 0; i < embed->size(); ++i) {
        full[(*embed)[i]] = local[static_cast<Eigen::Index>(i)];
      }
    } else {
      full = std::move(local);
    }
    out.states.push_back({value, std::move(full)});
  }
  out.splitting = h.rows() > 1 ? es.eigenvalues()[1] - es.eigenvalues()[0]
                               : std::numeric_limits<double>::infinity();
  out.degenerate = out.splitting <= degeneracy_tol;
  return out;
}

Matrix restrict(const Matrix& h, const std::vector<Eigen::Index>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Matrix sub(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      sub(i, j) = h(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
  }
  return sub;
}

}  // namespace

DenseOperator::DenseOperator(int n_sites, Matrix matrix)
    : n_sites_(n_sites), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() ||
      matrix_.rows() != (Eigen::Index{1} << n_sites_)) {
    throw Error(ErrorKind::InvalidArgument, "DenseOperator must be 2^N x 2^N");
  }
}

double DenseOperator::hermiticity_error() const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

DenseOperator build_hamiltonian(const XYParams& params, RotationMethod method, Limits limits) {
  validate(params, 2);
  check_limits(params.n_sites, limits);
  const int n = params.n_sites;
  if (method == RotationMethod::RotatedCouplings) {
    // U sx U^+ = cos(phi) sx - sin(phi) sy,  U sy U^+ = sin(phi) sx + cos(phi) sy.
    const double c = std::cos(params.phi);
    const double s = std::sin(params.phi);
    const Pauli sx = c * pauli_x() - s * pauli_y();
    const Pauli sy = s * pauli_x() + c * pauli_y();
    return DenseOperator(n, assemble(n, params.lambda, params.gamma, sx, sy));
  }
  Matrix h = assemble(n, params.lambda, params.gamma, pauli_x(), pauli_y());
  if (params.phi != 0.0) {
    // (U H U^+)_{ab} = H_ab exp(i phi (m_a - m_b) / 2), m = sum sz.
    const Eigen::VectorXd m = total_sz_diagonal(n);
    for (Eigen::Index b = 0; b < h.cols(); ++b) {
      for (Eigen::Index a = 0; a < h.rows(); ++a) {
        if (h(a, b) != cplx{}) h(a, b) *= std::polar(1.0, 0.5 * params.phi * (m[a] - m[b]));
      }
    }
  }
  return DenseOperator(n, std::move(h));
}

Eigen::VectorXd total_sz_diagonal(int n_sites) {
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Eigen::VectorXd m(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    m[s] = n_sites - 2.0 * std::popcount(static_cast<unsigned long long>(s));
  }
  return m;
}

std::vector<Eigen::Index> sector_indices(int n_sites, ParitySector sector) {
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  std::vector<Eigen::Index> idx;
  idx.reserve(static_cast<std::size_t>(sector == ParitySector::Full ? dim : dim / 2));
  for (Eigen::Index s = 0; s < dim; ++s) {
    // P = prod sz = (-1)^{number of down spins}.
    const bool even = std::popcount(static_cast<unsigned long long>(s)) % 2 == 0;
    if (sector == ParitySector::Full || (sector == ParitySector::Even) == even) {
      idx.push_back(s);
    }
  }
  return idx;
}

LowSpectrum lowest_states(const DenseOperator& h, int count, ParitySector sector,
                          double degeneracy_tol) {
  if (sector == ParitySector::Full) {
    return extract(h.matrix(), count, degeneracy_tol, nullptr, h.dim());
  }
  const auto idx = sector_indices(h.n_sites(), sector);
  return extract(restrict(h.matrix(), idx), count, degeneracy_tol, &idx, h.dim());
}

LowSpectrum lowest_states(const Matrix& h, int count, double degeneracy_tol) {
  return extract(h, count, degeneracy_tol, nullptr, h.rows());
}

Eigen::VectorXd spectrum(const DenseOperator& h, ParitySector sector) {
  const Matrix m = sector == ParitySector::Full
                       ? h.matrix()
                       : restrict(h.matrix(), sector_indices(h.n_sites(), sector));
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::Numeric, "Hermitian eigensolver failed to converge");
  }
  return es.eigenvalues();
}

// ---- loops ---------------------------------------------------------------

std::vector<double> LoopDiscretization::phis() const {
  if (steps < 8) {
    throw Error(ErrorKind::InvalidArgument, "loop needs at least 8 steps");
  }
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int j = 0; j < steps; ++j) out[static_cast<std::size_t>(j)] = start + j * period / steps;
  return out;
}

LoopTrace trace_loop(const HamiltonianFamily& family, const LoopDiscretization& loop,
                     const TrackOptions& options) {
  LoopTrace trace;
  trace.phis = loop.phis();
  trace.min_gap = std::numeric_limits<double>::infinity();
  trace.states.reserve(trace.phis.size());
  trace.energies.reserve(trace.phis.size());

  for (std::size_t j = 0; j < trace.phis.size(); ++j) {
    const double phi = trace.phis[j];
    const auto es = solve(family(phi));
    const Eigen::Index dim = es.eigenvalues().size();
    if (options.level < 0 || options.level >= dim) {
      throw Error(ErrorKind::InvalidArgument, "tracked level outside the spectrum");
    }

    Eigen::Index pick = options.level;
    if (j > 0 && options.level > 0) {
      // Follow the level through near-crossings by maximal overlap.
      const Vector& prev = trace.states.back();
      double best = -1.0;
      for (Eigen::Index k = std::max<Eigen::Index>(0, options.level - 1);
           k <= std::min<Eigen::Index>(dim - 1, options.level + 1); ++k) {
        const double ov = std::abs(prev.dot(es.eigenvectors().col(k)));
        if (ov > best) {
          best = ov;
          pick = k;
        }
      }
    }

    const auto& ev = es.eigenvalues();
    double gap = std::numeric_limits<double>::infinity();
    if (pick > 0) gap = std::min(gap, ev[pick] - ev[pick - 1]);
    if (pick + 1 < dim) gap = std::min(gap, ev[pick + 1] - ev[pick]);
    trace.min_gap = std::min(trace.min_gap, gap);
    if (gap < options.flag_splitting) trace.near_degenerate = true;
    if (options.level == 0 && gap < options.gap_tol) {
      throw TrackingError(ErrorKind::Tracking,
                          "ground-state gap " + std::to_string(gap) + " below tolerance at step " +
                              std::to_string(j) + " (phi=" + std::to_string(phi) + ")",
                          static_cast<int>(j), phi);
    }

    Vector v = es.eigenvectors().col(pick);
    fix_gauge(v);
    trace.energies.push_back(ev[pick]);
    trace.states.push_back(std::move(v));
  }

  const auto overlaps = loop_overlaps(trace.states);
  for (std::size_t j = 0; j < overlaps.size(); ++j) {
    const double a = std::abs(overlaps[j]);
    trace.min_overlap = std::min(trace.min_overlap, a);
    if (a < options.min_overlap) {
      throw TrackingError(ErrorKind::Discretization,
                          "overlap " + std::to_string(a) + " between steps " + std::to_string(j) +
                              " and " + std::to_string((j + 1) % overlaps.size()) +
                              "; refine the loop",
                          static_cast<int>(j), trace.phis[j]);
    }
  }
  return trace;
}

std::vector<std::complex<double>> loop_overlaps(std::span<const Vector> states) {
  std::vector<std::complex<double>> out;
  out.reserve(states.size());
  for (std::size_t j = 0; j < states.size(); ++j) {
    const Vector& next = states[(j + 1) % states.size()];
    out.push_back(states[j].dot(next));  // <psi_j|psi_{j+1}>
  }
  return out;
}

double pancharatnam_phase(std::span<const Vector> states) {
  if (states.empty()) return 0.0;
  std::complex<double> prod{1.0, 0.0};
  for (const auto& ov : loop_overlaps(states)) {
    prod *= ov / std::abs(ov);  // normalise each factor; only the argument matters
  }
  return wrap_phase(kLoopPhaseSign * std::arg(prod));
}

PhaseResult phase_from_trace(const LoopTrace& trace, int windings) {
  if (windings < 1) {
    throw Error(ErrorKind::InvalidArgument, "winding number must be >= 1");
  }
  std::vector<Vector> circuit;
  circuit.reserve(trace.states.size() * static_cast<std::size_t>(windings));
  for (int w = 0; w < windings; ++w) {
    circuit.insert(circuit.end(), trace.states.begin(), trace.states.end());
  }
  const double single = pancharatnam_phase(trace.states);
  PhaseResult p = PhaseResult::plain(windings * single, windings);
  p.wrapped = pancharatnam_phase(circuit);
  return p;
}

void write_loop_trace_csv(std::ostream& os, const LoopTrace& trace) {
  os << "phi,overlap_re,overlap_im,cumulative_phase\n";
  const auto overlaps = loop_overlaps(trace.states);
  std::complex<double> prod{1.0, 0.0};
  for (std::size_t j = 0; j < overlaps.size(); ++j) {
    prod *= overlaps[j] / std::abs(overlaps[j]);
    os << format_real(trace.phis[j]) << ',' << format_real(overlaps[j].real()) << ','
       << format_real(overlaps[j].imag()) << ','
       << format_real(wrap_phase(kLoopPhaseSign * std::arg(prod))) << '\n';
  }
}

HamiltonianFamily xy_family(const XYParams& base, ParitySector sector, Limits limits) {
  XYParams p0 = base;
  p0.phi = 0.0;
  const DenseOperator h0 = build_hamiltonian(p0, RotationMethod::Conjugation, limits);
  const auto idx = sector_indices(base.n_sites, sector);
  const Eigen::VectorXd m_full = total_sz_diagonal(base.n_sites);
  Eigen::VectorXd m(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) m[static_cast<Eigen::Index>(i)] = m_full[idx[i]];
  Matrix h = restrict(h0.matrix(), idx);

  return [h = std::move(h), m = std::move(m)](double phi) {
    Matrix out = h;
    for (Eigen::Index b = 0; b < out.cols(); ++b) {
      for (Eigen::Index a = 0; a < out.rows(); ++a) {
        if (out(a, b) != cplx{}) out(a, b) *= std::polar(1.0, 0.5 * phi * (m[a] - m[b]));
      }
    }
    return out;
  };
}

HamiltonianFamily spin_half_family(double theta) {
  return [theta](double phi) {
    const double bx = std::sin(theta) * std::cos(phi);
    const double by = std::sin(theta) * std::sin(phi);
    const double bz = std::cos(theta);
    Matrix h = 0.5 * (bx * pauli_x() + by * pauli_y() + bz * pauli_z());
    return h;
  };
}

LoopPhaseResult discrete_loop_phase(const XYParams& params, Level level,
                                    LoopDiscretization loop, const LoopPhaseOptions& options) {
  validate(params, 2);
  loop.start = params.phi;
  loop.period = std::numbers::pi;
  TrackOptions track;
  track.level = level == Level::Ground ? 0 : 1;
  track.gap_tol = options.gap_tol;
  const auto trace = trace_loop(xy_family(params, options.sector, options.limits), loop, track);
  LoopPhaseResult out;
  out.phase = phase_from_trace(trace, options.windings);
  out.near_degenerate = trace.near_degenerate;
  out.min_gap = trace.min_gap;
  out.min_overlap = trace.min_overlap;
  return out;
}

Observable ground_energy_ed(const XYParams& params, ParitySector sector, Limits limits) {
  const auto low = lowest_states(build_hamiltonian(params, RotationMethod::Conjugation, limits),
                                 2, sector);
  return {low.states.front().value, low.degenerate};
}

Observable magnetization_ed(const XYParams& params, ParitySector sector, Limits limits) {
  const auto low = lowest_states(build_hamiltonian(params, RotationMethod::Conjugation, limits),
                                 2, sector);
  const Vector& g = low.states.front().vector;
  const Eigen::VectorXd m = total_sz_diagonal(params.n_sites);
  return {(g.cwiseAbs2().array() * m.array()).sum(), low.degenerate};
}

}  // namespace xyberry::ed
