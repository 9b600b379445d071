// Real-space simulation of inhomogeneous split-step walks: two-zone coin
// profiles, time evolution, bound-state detection and 2D edge dynamics.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sswalk/operators.hpp"
#include "sswalk/spectral.hpp"

namespace sswalk {

/// SSQW on a ring with uniform theta1 and a site-dependent theta2.
struct BoundaryConfig {
  int n = 0;
  CoinAngle theta1;
  CoinProfile theta2;
  /// Interface sites. A two-zone profile with boundary b has interfaces at
  /// b and 0 (the ring closes the left zone onto the right one).
  std::vector<int> boundaries;
  double smoothing = 0.0;

  static BoundaryConfig uniform(int n, CoinAngle theta1, CoinAngle theta2);
  static BoundaryConfig two_zone(int n, CoinAngle theta1, CoinAngle left, CoinAngle right,
                                 std::optional<int> boundary = std::nullopt, double smoothing = 0.0);
};

FactorizedPropagator build_inhomogeneous_ssqw_factors(const BoundaryConfig& config);
PropagatorMatrix build_inhomogeneous_ssqw(const BoundaryConfig& config);

/// What evolve measures besides the marginals: the probability within
/// `half_width` sites (circular distance along `axis`) of any of `centres`,
/// and the spread per axis of the displacement from `origin`, wrapped into
/// [-N/2, N/2).
struct Observation {
  int axis = 0;
  std::vector<int> centres;
  int half_width = 5;
  std::vector<int> origin;
};

struct TrajectoryStep {
  int step = 0;
  double norm = 1.0;
  /// One marginal per axis; in 1D this is the position distribution.
  std::vector<std::vector<double>> marginals;
  double window_probability = 0.0;
  /// Standard deviation of the wrapped displacement, per axis.
  std::vector<double> spread;
};

struct Trajectory {
  LatticeGeometry geometry;
  Observation observation;
  /// Records for steps 0..T.
  std::vector<TrajectoryStep> steps;
  WalkerState final_state;

  [[nodiscard]] int step_count() const noexcept { return static_cast<int>(steps.size()) - 1; }
  /// Largest |sum_x p(x) - 1| over all records.
  [[nodiscard]] double max_normalization_error() const;
};

/// Observation for psi with origin at its most probable site and the window
/// centred there.
Observation observe_from_peak(const WalkerState& psi, int axis, int half_width);

Trajectory evolve(const WalkerState& psi0, const PropagatorMatrix& u, int steps, const Observation& observation);
Trajectory evolve(const WalkerState& psi0, const FactorizedPropagator& u, int steps, const Observation& observation);

struct DetectorSettings {
  double energy_tolerance = 1e-6;
  double min_window_probability = 0.5;
  int window = 5;
};

struct LocalizationMetrics {
  double ipr = 0.0;
  double window_probability = 0.0;
  /// Decay length from a least-squares fit of log p against the distance
  /// to the nearest centre, outside the window. Empty when fewer than 4
  /// usable points remain or the fitted profile does not decay.
  std::optional<double> decay_length;
};

/// Metrics of a distribution over a ring of p.size() sites.
LocalizationMetrics localization_metrics(std::span<const double> p, std::span<const int> centres, int window);
/// Metrics of the marginal of psi along `axis`.
LocalizationMetrics localization_metrics(const WalkerState& psi, std::span<const int> centres, int window,
                                         int axis = 0);

struct ModeDiagnostics {
  /// -arg(eigenvalue) in (-pi, pi].
  double quasienergy = 0.0;
  LocalizationMetrics metrics;
  bool flagged = false;
};

struct SpectrumRecord {
  LatticeGeometry geometry;
  DetectorSettings settings;
  std::vector<int> boundaries;
  /// Orthonormal eigenvectors as columns, ordered like `modes`.
  Matrix eigenvectors;
  std::vector<ModeDiagnostics> modes;
  /// |U - V diag(lambda) V^dagger|
  double reconstruction_error = 0.0;
  /// max |(V^dagger V - 1)_ij|
  double orthonormality_error = 0.0;
  /// Spread of the flagged quasienergies near 0 and near pi, when at least
  /// two modes are flagged there (hybridization of the two interfaces).
  std::optional<double> zero_mode_splitting;
  std::optional<double> pi_mode_splitting;

  [[nodiscard]] std::vector<int> flagged_indices() const;
  [[nodiscard]] WalkerState eigenstate(int index) const;
};

/// Full diagonalization of u with per-mode localization diagnostics around
/// the given boundary sites (circular distance along axis 0).
SpectrumRecord bound_state_spectrum(const PropagatorMatrix& u, std::span<const int> boundaries,
                                    const DetectorSettings& settings = {});

/// 2D walk with theta2 varying along axis 0, evolved with the factorized
/// propagator. Window probability is measured along axis 0 around
/// `interfaces`; the origin is the most probable site of psi0.
/// Requires n2 >= 2 steps + 2.
Trajectory edge_state_sim_2d(CoinAngle theta1, const CoinProfile& theta2_axis0, const WalkerState& psi0, int steps,
                             std::span<const int> interfaces, int window = 5);

/// Angles -pi + 2 pi (i + 1) / m for i = 0..m-1, covering (-pi, pi].
std::vector<double> angle_grid(int m);

struct PhasePoint {
  double theta1 = 0.0;
  double theta2 = 0.0;
  Gaps gaps;
  std::optional<int> winding;
};

struct PhaseDiagram {
  int grid = 0;
  int kgrid = 0;
  /// Row-major: index i * grid + j holds (angle_grid[i], angle_grid[j]).
  std::vector<PhasePoint> points;

  [[nodiscard]] const PhasePoint& at(int i, int j) const {
    return points.at(static_cast<std::size_t>(i) * static_cast<std::size_t>(grid) + static_cast<std::size_t>(j));
  }
};

PhaseDiagram phase_diagram_scan(int grid, int kgrid, int threads = 1);

/// Two cells of the same theta1 row, consecutive among the cells with a
/// defined winding (gapless cells in between are skipped), whose windings
/// differ.
struct PhaseBoundary {
  PhasePoint left;
  PhasePoint right;
  /// Smallest of the four gaps of the two cells.
  double min_gap = 0.0;
};

/// All boundaries along theta2 (periodic in theta2), sorted by decreasing
/// min_gap.
std::vector<PhaseBoundary> find_phase_boundaries(const PhaseDiagram& diagram);

/// For each theta1 row holding two winding values, the best-gapped cell of
/// each; returns the row whose weaker cell has the largest gap. These two
/// theta2 values make a well-separated two-zone profile.
std::optional<PhaseBoundary> best_two_zone_pair(const PhaseDiagram& diagram);

}  // namespace sswalk
