// Finite-dimensional Hilbert-space primitives for walks on periodic rings.
//
// Basis ordering is site-major, coin-minor. In 1D the index of |x, c> is
// 2*x + c; in 2D the index of |x1, x2, c> is 2*(x1*N2 + x2) + c, with
// c = 0 for |up> and c = 1 for |down>.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sswalk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;

/// Tolerance on state norms and on unitarity of propagators.
inline constexpr double kUnitTolerance = 1e-12;

/// Thrown when two objects defined on different lattices are combined.
class GeometryMismatch : public std::invalid_argument {
 public:
  explicit GeometryMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// A periodic ring (1D) or torus (2D) of sites, each carrying a two-level coin.
class LatticeGeometry {
 public:
  static constexpr int kCoinDim = 2;

  explicit LatticeGeometry(std::vector<int> dims);
  static LatticeGeometry ring(int n) { return LatticeGeometry({n}); }
  static LatticeGeometry torus(int n1, int n2) { return LatticeGeometry({n1, n2}); }

  [[nodiscard]] const std::vector<int>& dims() const noexcept { return dims_; }
  [[nodiscard]] int rank() const noexcept { return static_cast<int>(dims_.size()); }
  [[nodiscard]] int extent(int axis) const { return dims_.at(static_cast<std::size_t>(axis)); }
  [[nodiscard]] int site_count() const noexcept;
  [[nodiscard]] int dimension() const noexcept { return site_count() * kCoinDim; }

  /// Flattened site index of a coordinate tuple; throws std::out_of_range.
  [[nodiscard]] int site_index(std::span<const int> site) const;
  /// Coordinates of a flattened site index.
  [[nodiscard]] std::vector<int> site_coords(int site) const;
  [[nodiscard]] int basis_index(int site, int coin) const noexcept { return site * kCoinDim + coin; }

  /// Wrap a coordinate onto the ring of the given axis.
  [[nodiscard]] int wrap(int axis, int x) const;

  [[nodiscard]] std::string describe() const;

  friend bool operator==(const LatticeGeometry&, const LatticeGeometry&) = default;

 private:
  std::vector<int> dims_;
};

void require_same_geometry(const LatticeGeometry& a, const LatticeGeometry& b, const char* context);

/// Normalized amplitude vector over (site x coin).
class WalkerState {
 public:
  /// Throws std::invalid_argument unless |amplitudes| = 1 within kUnitTolerance.
  WalkerState(LatticeGeometry geometry, Vector amplitudes);
  /// Rescales to unit norm; throws std::invalid_argument for a zero vector.
  static WalkerState normalized(LatticeGeometry geometry, Vector amplitudes);

  [[nodiscard]] const LatticeGeometry& geometry() const noexcept { return geometry_; }
  [[nodiscard]] const Vector& amplitudes() const noexcept { return amplitudes_; }
  [[nodiscard]] double norm() const { return amplitudes_.norm(); }
  [[nodiscard]] Complex amplitude(int site, int coin) const {
    return amplitudes_(geometry_.basis_index(site, coin));
  }

 private:
  struct Unchecked {};
  WalkerState(Unchecked, LatticeGeometry geometry, Vector amplitudes)
      : geometry_(std::move(geometry)), amplitudes_(std::move(amplitudes)) {}

  friend class PropagatorMatrix;
  friend class FactorizedPropagator;

  LatticeGeometry geometry_;
  Vector amplitudes_;
};

/// Dense unitary acting on the full walk Hilbert space.
class PropagatorMatrix {
 public:
  /// Throws std::invalid_argument if the matrix has the wrong shape or
  /// violates unitarity by more than kUnitTolerance (max-entry norm).
  PropagatorMatrix(LatticeGeometry geometry, Matrix matrix);
  static PropagatorMatrix identity(const LatticeGeometry& geometry);

  [[nodiscard]] const LatticeGeometry& geometry() const noexcept { return geometry_; }
  [[nodiscard]] const Matrix& matrix() const noexcept { return matrix_; }
  [[nodiscard]] PropagatorMatrix adjoint() const;

  /// max |(U^dagger U - 1)_ij|
  [[nodiscard]] double unitarity_defect() const;

  [[nodiscard]] WalkerState apply(const WalkerState& psi) const;

  friend PropagatorMatrix operator*(const PropagatorMatrix& a, const PropagatorMatrix& b);

 private:
  LatticeGeometry geometry_;
  Matrix matrix_;
};

double unitarity_defect(const Matrix& u);

/// Coin amplitudes (up, down) at one site, normalized. Throws on a
/// zero coin vector or a site outside the lattice.
WalkerState make_basis_state(const LatticeGeometry& geometry, std::span<const int> site,
                             Complex coin_up, Complex coin_down);
inline WalkerState make_basis_state(const LatticeGeometry& geometry, std::initializer_list<int> site,
                                    Complex coin_up, Complex coin_down) {
  return make_basis_state(geometry, std::span<const int>(site.begin(), site.size()), coin_up,
                          coin_down);
}

WalkerState apply(const PropagatorMatrix& u, const WalkerState& psi);

/// Site probabilities p(site) summed over the coin, indexed by flattened site.
std::vector<double> position_distribution(const WalkerState& psi);
/// Marginal of the position distribution along one axis.
std::vector<double> marginal_distribution(const WalkerState& psi, int axis);
std::vector<double> marginal_distribution(const LatticeGeometry& geometry,
                                          std::span<const double> site_probabilities, int axis);

/// Spectral norm |A - B|.
double operator_distance(const PropagatorMatrix& a, const PropagatorMatrix& b);
double operator_distance(const Matrix& a, const Matrix& b);

/// min over phi of |A - e^{i phi} B|, with phi = arg tr(B^dagger A).
double phase_insensitive_distance(const PropagatorMatrix& a, const PropagatorMatrix& b);
double phase_insensitive_distance(const Matrix& a, const Matrix& b);

double spectral_norm(const Matrix& m);

/// 1 (x) m for a single-site operator m acting on the coin.
Matrix coin_lift(const LatticeGeometry& geometry, const Matrix2& m);

}  // namespace sswalk
