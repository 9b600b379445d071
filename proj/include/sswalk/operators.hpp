// Propagator constructors: coins, conditional shifts, one-step walk
// operators in 1D and 2D, the q-plate, and position-dependent coins.
//
// Every step operator exists in two forms. The *_factors functions return a
// FactorizedPropagator, a product of coin layers and shift layers that can
// be applied to a state in O(dim) per layer. The plain functions return the
// dense PropagatorMatrix assembled from the same factors.

#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "sswalk/core.hpp"

namespace sswalk {

/// Reduce an angle to (-pi, pi].
double normalize_angle(double radians);

/// Coin rotation angle, normalized into (-pi, pi] on construction.
class CoinAngle {
 public:
  constexpr CoinAngle() = default;
  CoinAngle(double radians) : value_(normalize_angle(radians)) {}  // NOLINT(google-explicit-constructor)

  [[nodiscard]] double radians() const noexcept { return value_; }
  friend bool operator==(CoinAngle, CoinAngle) = default;

 private:
  double value_ = 0.0;
};

/// Coin angle per site along one lattice axis.
class CoinProfile {
 public:
  explicit CoinProfile(std::vector<CoinAngle> thetas);

  static CoinProfile uniform(int n, CoinAngle theta);

  /// Sites [0, boundary) take `left`, sites [boundary, n) take `right`.
  /// The default boundary is n/2, so on the ring the two interfaces sit
  /// between n/2-1 | n/2 and n-1 | 0. A positive `smoothing` replaces the
  /// step by a linear ramp of that many sites centred on each interface.
  static CoinProfile two_zone(int n, CoinAngle left, CoinAngle right, std::optional<int> boundary = std::nullopt,
                              double smoothing = 0.0);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(thetas_.size()); }
  [[nodiscard]] CoinAngle operator[](int x) const { return thetas_.at(static_cast<std::size_t>(x)); }
  [[nodiscard]] const std::vector<CoinAngle>& values() const noexcept { return thetas_; }
  [[nodiscard]] bool is_uniform() const;

  /// Profile translated along the ring: result[x] = this[x - offset].
  [[nodiscard]] CoinProfile rotated(int offset) const;

 private:
  std::vector<CoinAngle> thetas_;
};

/// Which coin basis vector the left-circular polarization is identified with.
enum class PolarizationMapping { kLeftIsUp, kLeftIsDown };

/// q-plate charge and retardation. 2q must be an integer and delta in [0, pi].
class QPlateParams {
 public:
  QPlateParams(double q, double delta);

  [[nodiscard]] double charge() const noexcept { return q_; }
  [[nodiscard]] double retardation() const noexcept { return delta_; }
  /// OAM jump 2q.
  [[nodiscard]] int oam_step() const noexcept { return oam_step_; }

 private:
  double q_;
  double delta_;
  int oam_step_;
};

// ---- 2x2 coin-space matrices ------------------------------------------------

Matrix2 pauli_x();
Matrix2 pauli_y();
Matrix2 pauli_z();
/// exp(-i a sigma_z)
Matrix2 z_phase(double a);

/// C(theta) = cos(theta) 1 - i sin(theta) sigma_y = [[c, -s], [s, c]].
Matrix2 coin(CoinAngle theta);

/// e^{-i pi sz/4} C(theta1) sigma_x e^{i pi sz/4}: the coin that pairs with a
/// single q-plate in the one-q-plate SSQW scheme.
Matrix2 smp_tilde_coin(CoinAngle theta1);

// ---- structured propagators ---------------------------------------------------

/// Coin operation. `blocks` holds one 2x2 matrix per coordinate along `axis`
/// (the same matrix for every site sharing that coordinate), or a single
/// matrix for a uniform coin.
struct CoinLayer {
  int axis = 0;
  std::vector<Matrix2> blocks;
};

/// Coin-conditioned translation along `axis`: the |up> component moves by
/// `up` sites, the |down> component by `down` sites.
struct ShiftLayer {
  int axis = 0;
  int up = 0;
  int down = 0;
};

using Layer = std::variant<CoinLayer, ShiftLayer>;

class FactorizedPropagator {
 public:
  explicit FactorizedPropagator(LatticeGeometry geometry);

  [[nodiscard]] const LatticeGeometry& geometry() const noexcept { return geometry_; }
  /// Layers in application order (first element acts first).
  [[nodiscard]] const std::vector<Layer>& layers() const noexcept { return layers_; }

  FactorizedPropagator& then_coin(const Matrix2& m);
  FactorizedPropagator& then_coin(const CoinProfile& profile, int axis);
  FactorizedPropagator& then_coin_blocks(std::vector<Matrix2> blocks, int axis);
  FactorizedPropagator& then_shift(int axis, int up, int down);
  FactorizedPropagator& then(const FactorizedPropagator& next);

  [[nodiscard]] Vector apply(const Vector& amplitudes) const;
  [[nodiscard]] WalkerState apply(const WalkerState& psi) const;
  [[nodiscard]] PropagatorMatrix dense() const;

  /// a * b: apply b, then a.
  friend FactorizedPropagator operator*(const FactorizedPropagator& a, const FactorizedPropagator& b);

 private:
  void apply_layer(const Layer& layer, Eigen::Ref<Matrix> columns) const;

  LatticeGeometry geometry_;
  std::vector<Layer> layers_;
};

// ---- 1D ------------------------------------------------------------------------

/// F (x) 1, the coin-independent translation x -> x+1.
FactorizedPropagator forward_f_factors(int n);
/// S = F (x) |up><up| + F^dagger (x) |down><down|
FactorizedPropagator shift_s_factors(int n);
/// T+ = F (x) |up><up| + 1 (x) |down><down|
FactorizedPropagator t_plus_factors(int n);
/// T- = 1 (x) |up><up| + F^dagger (x) |down><down|
FactorizedPropagator t_minus_factors(int n);

PropagatorMatrix forward_f(int n);
PropagatorMatrix shift_s(int n);
PropagatorMatrix t_plus(int n);
PropagatorMatrix t_minus(int n);

/// Z(theta) = (1 (x) C_theta) S
FactorizedPropagator oqw_factors(CoinAngle theta, int n);
PropagatorMatrix oqw_step(CoinAngle theta, int n);

/// Z_ss(theta1, theta2) = (1 (x) C_theta1) T- (1 (x) C_theta2) T+
FactorizedPropagator ssqw_factors(CoinAngle theta1, const CoinProfile& theta2);
PropagatorMatrix ssqw_step(CoinAngle theta1, CoinAngle theta2, int n);

/// Double-shift variant (1 (x) C_theta1) T-^2 (1 (x) C_theta2) T+^2. Needs even n.
FactorizedPropagator ssqw_double_factors(CoinAngle theta1, CoinAngle theta2, int n);
PropagatorMatrix ssqw_double_step(CoinAngle theta1, CoinAngle theta2, int n);

/// Q = cos(delta) 1 - i sin(delta) (F_2q (x) |L><R| + F_2q^dagger (x) |R><L|).
/// Rejects |2q| >= n, where the OAM jump would alias around the ring.
PropagatorMatrix qplate(const QPlateParams& params, int n,
                        PolarizationMapping mapping = PolarizationMapping::kLeftIsUp);

/// Block-diagonal coin with C_{theta(x)} at every site whose `axis`
/// coordinate is x.
PropagatorMatrix site_dependent_coin(const CoinProfile& profile, int axis, const LatticeGeometry& geometry);

// ---- 2D --------------------------------------------------------------------------

/// Conditional shift along one axis of an n1 x n2 torus.
FactorizedPropagator conditional_shift_factors(const LatticeGeometry& geometry, int axis, int up, int down);

PropagatorMatrix s1(int n1, int n2);
PropagatorMatrix s2(int n1, int n2);
/// S3 = S1 S2
PropagatorMatrix s3(int n1, int n2);

/// Z_2D = S3 C_theta1 S2 C_theta2 S1 C_theta1, with theta2 allowed to vary
/// along axis 0.
FactorizedPropagator ssqw2d_factors(CoinAngle theta1, const CoinProfile& theta2_axis0, int n2);
PropagatorMatrix ssqw2d_step(CoinAngle theta1, CoinAngle theta2, int n1, int n2);

// ---- generalized SMP gadget --------------------------------------------------

struct SmpRadii {
  /// r_max for |l| = 0, 1, ..., l_c + 1.
  std::vector<double> ring_radius;
  /// Wave-plate radius separating |l| <= l_c from the rest.
  double boundary_radius = 0.0;
};

/// r_max(l) = w sqrt(|l|/2) and r_boundary = (r_max(l_c) + r_max(l_c+1)) / 2.
SmpRadii generalized_smp_radii(int l_cut, double beam_width);

/// OAM value carried by ring site x: 0, 1, ..., then negative past n/2.
int oam_of_site(int site, int n);

/// Coin profile realized on the OAM ring by a generalized SMP gadget: modes
/// whose intensity ring lies inside the boundary radius get `inner`.
CoinProfile generalized_smp_profile(int n, int l_cut, double beam_width, CoinAngle inner, CoinAngle outer,
                                    double smoothing = 0.0);

}  // namespace sswalk
