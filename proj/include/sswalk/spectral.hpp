// Momentum-space analysis of translation-invariant walks.
//
// With |k> = sum_x e^{-ikx}|x>, the translation F acts as e^{ik}, so the
// conditional shift S becomes diag(e^{ik}, e^{-ik}) on the coin. Every block
// below is a 2x2 SU(2) matrix U = cos(E) 1 - i sin(E) n.sigma, with
// effective Hamiltonian H = i log U = E n.sigma.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sswalk/operators.hpp"

namespace sswalk {

using Vector3 = Eigen::Vector3d;

/// Below this value of sin(E) the Bloch direction is undefined (gap closing).
inline constexpr double kGapClosingThreshold = 1e-6;

/// Real coefficients (h0, h) of m = h0 1 + h.sigma for Hermitian m.
struct PauliDecomposition {
  double identity = 0.0;
  Vector3 vector = Vector3::Zero();
};
PauliDecomposition pauli_decompose(const Matrix2& hermitian);
Matrix2 pauli_dot(const Vector3& v);

/// exp(-i H) for Hermitian 2x2 H.
Matrix2 su2_exp(const Matrix2& hamiltonian);

/// Hermitian H with exp(-iH) = U and eigenvalues in (-pi, pi]. An eigenvalue
/// of exactly -1 is assigned quasienergy +pi.
Matrix2 su2_log(const Matrix2& unitary);

/// diag(e^{ik}, e^{-ik}), the momentum block of S.
Matrix2 shift_block(double k);
/// diag(e^{ik}, 1) and diag(1, e^{-ik}), the momentum blocks of T+ and T-.
Matrix2 t_plus_block(double k);
Matrix2 t_minus_block(double k);

/// A 2x2 block at fixed quasimomentum with its effective Hamiltonian.
struct BlochBlock {
  double k = 0.0;
  std::optional<double> ky;
  Matrix2 unitary = Matrix2::Identity();
  Matrix2 hamiltonian = Matrix2::Zero();
  /// Quasienergy in [0, pi].
  double energy = 0.0;
  /// Unit Bloch vector; empty at gap closings.
  std::optional<Vector3> direction;

  [[nodiscard]] bool gap_closing() const noexcept { return !direction.has_value(); }
};

/// Block built from a unitary through su2_log.
BlochBlock bloch_block_from_unitary(const Matrix2& unitary, double k, std::optional<double> ky = std::nullopt);

/// U_k = C_theta diag(e^{ik}, e^{-ik}), the block of Z(theta) = (1 (x) C) S.
BlochBlock bloch_block_oqw(CoinAngle theta, double k);

/// Time frame of a single OQW step: coin after the shift, Z = (1 (x) C) S,
/// or coin before it, Z-bar = S (1 (x) C). The two are related by the
/// similarity S and share their spectrum, not their Bloch vectors.
enum class WalkFrame { kCoinAfterShift, kCoinBeforeShift };

/// An SU(2) element stored as cos(E) and sin(E) n. Products of such
/// elements are evaluated in closed form without dividing by sin(E).
struct Su2Rotation {
  double cos_energy = 1.0;
  Vector3 scaled_axis = Vector3::Zero();

  [[nodiscard]] double energy() const;
  [[nodiscard]] Matrix2 unitary() const;
};

/// Closed-form product left * right:
///   cos E = cos E1 cos E2 - sin E1 sin E2 n1.n2
///   sin E N = cos E1 sin E2 n2 + cos E2 sin E1 n1 + sin E1 sin E2 n1 x n2
Su2Rotation compose(const Su2Rotation& left, const Su2Rotation& right);

/// Block data of a closed-form rotation: E, H = E N.sigma, and N when defined.
BlochBlock to_bloch_block(const Su2Rotation& r, double k, std::optional<double> ky = std::nullopt);

/// OQW block as an Su2Rotation, in the chosen frame.
Su2Rotation oqw_rotation(CoinAngle theta, double k, WalkFrame frame = WalkFrame::kCoinAfterShift);

struct Dispersion {
  double energy = 0.0;
  std::optional<Vector3> direction;
  [[nodiscard]] bool gap_closing() const noexcept { return !direction.has_value(); }
};

/// E(k) = arccos(cos(theta) cos(k)) and
/// n(k) = (sin(theta) sin(k), sin(theta) cos(k), -cos(theta) sin(k)) / sin(E).
/// These are the Bloch data of the coin-before-shift frame, D(k) C_theta.
Dispersion dispersion_oqw(CoinAngle theta, double k);

/// Effective Hamiltonian of Z(theta1) Z(theta2) (the double-shift SSQW) at
/// quasimomentum k, from the closed-form composition of the two OQW blocks.
BlochBlock hamiltonian_ss_closed_form(CoinAngle theta1, CoinAngle theta2, double k,
                                      WalkFrame frame = WalkFrame::kCoinAfterShift);

/// Su2Rotation behind hamiltonian_ss_closed_form.
Su2Rotation ss_rotation(CoinAngle theta1, CoinAngle theta2, double k, WalkFrame frame = WalkFrame::kCoinAfterShift);

/// Direct 2x2 product of the OQW blocks, C1 D C2 D (or D C1 D C2 in the
/// coin-before-shift frame). Oracle for the closed form.
Matrix2 ss_product_block(CoinAngle theta1, CoinAngle theta2, double k, WalkFrame frame = WalkFrame::kCoinAfterShift);

/// Block of the single-shift SSQW, C1 T-(q) C2 T+(q). Equals the double-shift
/// block at k = q/2.
Matrix2 single_shift_block(CoinAngle theta1, CoinAngle theta2, double q);

/// Effective Hamiltonian of the 2D walk in its decomposed form
/// Zss2(0, theta1) Zss1(theta2, theta1): the axis-2 factor at ky composed
/// (on the left) with the axis-1 factor at kx.
BlochBlock hamiltonian_2dss_closed_form(CoinAngle theta1, CoinAngle theta2, double kx, double ky);

/// Block of S1^dag Z_2D S1 assembled from 2x2 momentum blocks. Oracle for
/// the 2D closed form.
Matrix2 ssqw2d_product_block(CoinAngle theta1, CoinAngle theta2, double kx, double ky);

/// Baker-Campbell-Hausdorff series for i log(e^{-iH1} e^{-iH2}), truncated at
/// order 1, 2 or 3.
Matrix2 bch_truncated(const Matrix2& h1, const Matrix2& h2, int order);

/// Uniform grid of `resolution` momenta on (-pi, pi].
std::vector<double> momentum_grid(int resolution);

struct Gaps {
  double zero = 0.0;  ///< min_k E_ss(k)
  double pi = 0.0;    ///< min_k (pi - E_ss(k))
};

/// Quasienergy gaps around 0 and pi of the SSQW, on a k-grid (resolution >= 64).
Gaps gap(CoinAngle theta1, CoinAngle theta2, int resolution);

struct WindingAnalysis {
  std::optional<int> winding;
  Gaps gaps;
  /// Unit normal of the plane containing n(k), oriented along the chiral
  /// axis (-cos(theta1), 0, sin(theta1)).
  Vector3 normal = Vector3::Zero();
  /// max_k |n(k).normal|
  double planarity_residual = 0.0;
  /// Accumulated angle / 2 pi before rounding.
  double raw_winding = 0.0;
  /// Why no winding was produced (gapless, non-planar, non-integer).
  std::string failure;
};

/// Winding of the SSQW Bloch vector over the Brillouin zone of the
/// single-shift walk (q in (-pi, pi], equivalently the double-shift block
/// for k in (-pi/2, pi/2]). Never throws for physical input.
WindingAnalysis winding_analysis(CoinAngle theta1, CoinAngle theta2, int resolution);

/// Throws std::domain_error when the spectrum is gapless on the grid or the
/// Bloch vectors are not planar.
int winding_number(CoinAngle theta1, CoinAngle theta2, int resolution);

}  // namespace sswalk
