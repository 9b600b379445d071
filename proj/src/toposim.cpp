#include "sswalk/toposim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "sswalk/parallel.hpp"

namespace sswalk {

namespace {

constexpr double kPi = std::numbers::pi;

int circular_distance(int a, int b, int n) {
  const int d = ((a - b) % n + n) % n;
  return std::min(d, n - d);
}

int nearest_centre_distance(int x, std::span<const int> centres, int n) {
  int best = n;
  for (int c : centres) best = std::min(best, circular_distance(x, c, n));
  return best;
}

double window_probability(std::span<const double> p, std::span<const int> centres, int half_width) {
  const int n = static_cast<int>(p.size());
  double total = 0.0;
  for (int x = 0; x < n; ++x) {
    if (nearest_centre_distance(x, centres, n) <= half_width) total += p[static_cast<std::size_t>(x)];
  }
  return total;
}

double wrapped_spread(std::span<const double> p, int origin) {
  const int n = static_cast<int>(p.size());
  double mean = 0.0;
  double second = 0.0;
  for (int x = 0; x < n; ++x) {
    int d = ((x - origin) % n + n) % n;
    if (d >= (n + 1) / 2) d -= n;
    mean += p[static_cast<std::size_t>(x)] * d;
    second += p[static_cast<std::size_t>(x)] * d * d;
  }
  return std::sqrt(std::max(0.0, second - mean * mean));
}

TrajectoryStep record(const WalkerState& psi, int step, const Observation& obs) {
  const LatticeGeometry& g = psi.geometry();
  const auto p = position_distribution(psi);
  TrajectoryStep r;
  r.step = step;
  r.norm = psi.norm();
  for (int a = 0; a < g.rank(); ++a) {
    r.marginals.push_back(g.rank() == 1 ? p : marginal_distribution(g, p, a));
    r.spread.push_back(wrapped_spread(r.marginals.back(), obs.origin.at(static_cast<std::size_t>(a))));
  }
  r.window_probability = window_probability(r.marginals.at(static_cast<std::size_t>(obs.axis)), obs.centres, obs.half_width);
  return r;
}

void check_observation(const LatticeGeometry& g, const Observation& obs) {
  if (obs.axis < 0 || obs.axis >= g.rank()) throw std::invalid_argument("observation axis out of range");
  if (static_cast<int>(obs.origin.size()) != g.rank()) {
    throw std::invalid_argument("observation origin needs one coordinate per axis");
  }
  if (obs.half_width < 0) throw std::invalid_argument("window half-width must be non-negative");
}

template <class Propagator>
Trajectory evolve_with(const WalkerState& psi0, const Propagator& u, int steps, const Observation& obs) {
  if (steps < 1) throw std::invalid_argument("evolve needs at least one step");
  require_same_geometry(psi0.geometry(), u.geometry(), "evolve");
  check_observation(psi0.geometry(), obs);
  std::vector<TrajectoryStep> records;
  records.reserve(static_cast<std::size_t>(steps) + 1);
  WalkerState psi = psi0;
  records.push_back(record(psi, 0, obs));
  for (int t = 1; t <= steps; ++t) {
    psi = u.apply(psi);
    records.push_back(record(psi, t, obs));
  }
  return Trajectory{psi0.geometry(), obs, std::move(records), std::move(psi)};
}

double fold_quasienergy(Complex lambda) {
  const double e = -std::arg(lambda);
  return e <= -kPi ? kPi : e;
}

double distance_to_pi(double e) { return kPi - std::abs(e); }

std::optional<double> spread_of(const std::vector<double>& values) {
  if (values.size() < 2) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

}  // namespace

// ---- BoundaryConfig -------------------------------------------------------------

BoundaryConfig BoundaryConfig::uniform(int n, CoinAngle theta1, CoinAngle theta2) {
  return BoundaryConfig{n, theta1, CoinProfile::uniform(n, theta2), {}, 0.0};
}

BoundaryConfig BoundaryConfig::two_zone(int n, CoinAngle theta1, CoinAngle left, CoinAngle right,
                                        std::optional<int> boundary, double smoothing) {
  auto profile = CoinProfile::two_zone(n, left, right, boundary, smoothing);
  return BoundaryConfig{n, theta1, std::move(profile), {boundary.value_or(n / 2), 0}, smoothing};
}

FactorizedPropagator build_inhomogeneous_ssqw_factors(const BoundaryConfig& config) {
  if (config.theta2.size() != config.n) {
    throw std::invalid_argument("theta2 profile has " + std::to_string(config.theta2.size()) + " sites, expected " +
                                std::to_string(config.n));
  }
  return ssqw_factors(config.theta1, config.theta2);
}

PropagatorMatrix build_inhomogeneous_ssqw(const BoundaryConfig& config) {
  return build_inhomogeneous_ssqw_factors(config).dense();
}

// ---- evolution --------------------------------------------------------------------

double Trajectory::max_normalization_error() const {
  double worst = 0.0;
  for (const auto& r : steps) {
    for (const auto& m : r.marginals) {
      worst = std::max(worst, std::abs(std::accumulate(m.begin(), m.end(), 0.0) - 1.0));
    }
  }
  return worst;
}

Observation observe_from_peak(const WalkerState& psi, int axis, int half_width) {
  const auto p = position_distribution(psi);
  const int peak = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
  Observation obs;
  obs.axis = axis;
  obs.half_width = half_width;
  obs.origin = psi.geometry().site_coords(peak);
  obs.centres = {obs.origin.at(static_cast<std::size_t>(axis))};
  return obs;
}

Trajectory evolve(const WalkerState& psi0, const PropagatorMatrix& u, int steps, const Observation& observation) {
  return evolve_with(psi0, u, steps, observation);
}

Trajectory evolve(const WalkerState& psi0, const FactorizedPropagator& u, int steps, const Observation& observation) {
  return evolve_with(psi0, u, steps, observation);
}

// ---- localization -----------------------------------------------------------------

LocalizationMetrics localization_metrics(std::span<const double> p, std::span<const int> centres, int window) {
  if (centres.empty()) throw std::invalid_argument("localization metrics need at least one centre");
  const int n = static_cast<int>(p.size());
  LocalizationMetrics m;
  for (double v : p) m.ipr += v * v;
  m.window_probability = window_probability(p, centres, window);

  const int fit_radius = n / 4;
  std::vector<double> xs;
  std::vector<double> ys;
  for (int x = 0; x < n; ++x) {
    const int d = nearest_centre_distance(x, centres, n);
    const double v = p[static_cast<std::size_t>(x)];
    if (d > window && d <= fit_radius && v > 1e-28) {
      xs.push_back(d);
      ys.push_back(std::log(v));
    }
  }
  if (xs.size() < 4) return m;
  const double count = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / count;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx <= 0.0) return m;
  const double slope = sxy / sxx;
  if (slope < 0.0) m.decay_length = -1.0 / slope;
  return m;
}

LocalizationMetrics localization_metrics(const WalkerState& psi, std::span<const int> centres, int window, int axis) {
  const auto p = position_distribution(psi);
  if (psi.geometry().rank() == 1) return localization_metrics(p, centres, window);
  const auto marginal = marginal_distribution(psi.geometry(), p, axis);
  return localization_metrics(marginal, centres, window);
}

// ---- spectrum ---------------------------------------------------------------------

std::vector<int> SpectrumRecord::flagged_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i].flagged) out.push_back(static_cast<int>(i));
  }
  return out;
}

WalkerState SpectrumRecord::eigenstate(int index) const {
  return WalkerState::normalized(geometry, eigenvectors.col(index));
}

SpectrumRecord bound_state_spectrum(const PropagatorMatrix& u, std::span<const int> boundaries,
                                    const DetectorSettings& settings) {
  if (boundaries.empty()) throw std::invalid_argument("bound-state search needs at least one boundary site");
  const LatticeGeometry& g = u.geometry();
  Eigen::ComplexSchur<Matrix> schur(u.matrix());
  if (schur.info() != Eigen::Success) throw std::runtime_error("Schur decomposition did not converge");

  SpectrumRecord rec{g, settings, {boundaries.begin(), boundaries.end()}, schur.matrixU(), {}, 0.0, 0.0,
                     std::nullopt, std::nullopt};
  const Vector lambda = schur.matrixT().diagonal();
  const Matrix& v = rec.eigenvectors;
  rec.reconstruction_error = spectral_norm(u.matrix() - v * lambda.asDiagonal() * v.adjoint());
  rec.orthonormality_error =
      (v.adjoint() * v - Matrix::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();

  std::vector<double> near_zero;
  std::vector<double> near_pi;
  rec.modes.reserve(static_cast<std::size_t>(lambda.size()));
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    ModeDiagnostics mode;
    mode.quasienergy = fold_quasienergy(lambda(i));
    std::vector<double> p(static_cast<std::size_t>(g.site_count()), 0.0);
    for (int s = 0; s < g.site_count(); ++s) {
      p[static_cast<std::size_t>(s)] =
          std::norm(v(g.basis_index(s, 0), i)) + std::norm(v(g.basis_index(s, 1), i));
    }
    const auto along = g.rank() == 1 ? p : marginal_distribution(g, p, 0);
    mode.metrics = localization_metrics(along, boundaries, settings.window);
    const bool localized = mode.metrics.window_probability >= settings.min_window_probability;
    const bool at_zero = std::abs(mode.quasienergy) <= settings.energy_tolerance;
    const bool at_pi = distance_to_pi(mode.quasienergy) <= settings.energy_tolerance;
    mode.flagged = localized && (at_zero || at_pi);
    if (mode.flagged && at_zero) near_zero.push_back(mode.quasienergy);
    // Modes near pi sit on both sides of the branch cut; measure them from pi.
    if (mode.flagged && at_pi) near_pi.push_back(mode.quasienergy >= 0 ? mode.quasienergy : mode.quasienergy + 2 * kPi);
    rec.modes.push_back(mode);
  }
  rec.zero_mode_splitting = spread_of(near_zero);
  rec.pi_mode_splitting = spread_of(near_pi);
  return rec;
}

// ---- 2D edge states ---------------------------------------------------------------

Trajectory edge_state_sim_2d(CoinAngle theta1, const CoinProfile& theta2_axis0, const WalkerState& psi0, int steps,
                             std::span<const int> interfaces, int window) {
  const LatticeGeometry& g = psi0.geometry();
  if (g.rank() != 2) throw std::invalid_argument("edge-state simulation needs a 2D state");
  if (g.extent(0) != theta2_axis0.size()) {
    throw GeometryMismatch("theta2 profile length " + std::to_string(theta2_axis0.size()) + " differs from N1 = " +
                           std::to_string(g.extent(0)));
  }
  if (steps < 1) throw std::invalid_argument("edge-state simulation needs at least one step");
  if (g.extent(1) < 2 * steps + 2) {
    throw std::invalid_argument("N2 = " + std::to_string(g.extent(1)) + " is too small for " + std::to_string(steps) +
                                " steps (needs N2 >= 2T+2)");
  }
  if (interfaces.empty()) throw std::invalid_argument("edge-state simulation needs at least one interface");
  Observation obs = observe_from_peak(psi0, 0, window);
  obs.centres.assign(interfaces.begin(), interfaces.end());
  return evolve(psi0, ssqw2d_factors(theta1, theta2_axis0, g.extent(1)), steps, obs);
}

// ---- phase diagram ----------------------------------------------------------------

std::vector<double> angle_grid(int m) {
  if (m < 1) throw std::invalid_argument("angle grid needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = -kPi + 2.0 * kPi * (i + 1) / m;
  return out;
}

PhaseDiagram phase_diagram_scan(int grid, int kgrid, int threads) {
  const auto angles = angle_grid(grid);
  PhaseDiagram d;
  d.grid = grid;
  d.kgrid = kgrid;
  d.points.resize(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));
  parallel_for(d.points.size(), threads, [&](std::size_t idx) {
    PhasePoint& p = d.points[idx];
    p.theta1 = angles[idx / static_cast<std::size_t>(grid)];
    p.theta2 = angles[idx % static_cast<std::size_t>(grid)];
    p.gaps = gap(p.theta1, p.theta2, kgrid);
    p.winding = winding_analysis(p.theta1, p.theta2, kgrid).winding;
  });
  return d;
}

namespace {

double weakest_gap(const PhasePoint& p) { return std::min(p.gaps.zero, p.gaps.pi); }

}  // namespace

std::vector<PhaseBoundary> find_phase_boundaries(const PhaseDiagram& diagram) {
  std::vector<PhaseBoundary> out;
  for (int i = 0; i < diagram.grid; ++i) {
    std::vector<const PhasePoint*> defined;
    for (int j = 0; j < diagram.grid; ++j) {
      if (diagram.at(i, j).winding) defined.push_back(&diagram.at(i, j));
    }
    if (defined.size() < 2) continue;
    for (std::size_t k = 0; k < defined.size(); ++k) {
      const PhasePoint& a = *defined[k];
      const PhasePoint& b = *defined[(k + 1) % defined.size()];
      if (*a.winding != *b.winding) out.push_back({a, b, std::min(weakest_gap(a), weakest_gap(b))});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.min_gap > y.min_gap; });
  return out;
}

std::optional<PhaseBoundary> best_two_zone_pair(const PhaseDiagram& diagram) {
  std::optional<PhaseBoundary> best;
  for (int i = 0; i < diagram.grid; ++i) {
    std::map<int, const PhasePoint*> strongest;
    for (int j = 0; j < diagram.grid; ++j) {
      const PhasePoint& p = diagram.at(i, j);
      if (!p.winding) continue;
      auto [it, inserted] = strongest.try_emplace(*p.winding, &p);
      if (!inserted && weakest_gap(p) > weakest_gap(*it->second)) it->second = &p;
    }
    for (auto a = strongest.begin(); a != strongest.end(); ++a) {
      for (auto b = std::next(a); b != strongest.end(); ++b) {
        const double g = std::min(weakest_gap(*a->second), weakest_gap(*b->second));
        if (!best || g > best->min_gap) best = PhaseBoundary{*a->second, *b->second, g};
      }
    }
  }
  return best;
}

}  // namespace sswalk
