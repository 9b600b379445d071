#include "sswalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace sswalk {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

Matrix2 commutator(const Matrix2& a, const Matrix2& b) { return a * b - b * a; }

}  // namespace

PauliDecomposition pauli_decompose(const Matrix2& m) {
  PauliDecomposition d;
  d.identity = 0.5 * (m(0, 0) + m(1, 1)).real();
  d.vector = Vector3(0.5 * (m(0, 1) + m(1, 0)).real(), 0.5 * (m(1, 0) - m(0, 1)).imag(),
                     0.5 * (m(0, 0) - m(1, 1)).real());
  return d;
}

Matrix2 pauli_dot(const Vector3& v) {
  Matrix2 m;
  m << v.z(), Complex(v.x(), -v.y()), Complex(v.x(), v.y()), -v.z();
  return m;
}

Matrix2 su2_exp(const Matrix2& hamiltonian) {
  const auto d = pauli_decompose(hamiltonian);
  const double e = d.vector.norm();
  Matrix2 u = std::cos(e) * Matrix2::Identity();
  if (e > 0.0) u -= kI * (std::sin(e) / e) * pauli_dot(d.vector);
  return std::exp(-kI * d.identity) * u;
}

Matrix2 su2_log(const Matrix2& unitary) {
  Eigen::ComplexSchur<Matrix2> schur(unitary);
  const Matrix2& q = schur.matrixU();
  const Matrix2& t = schur.matrixT();
  Eigen::Vector2cd phases;
  for (int j = 0; j < 2; ++j) {
    double e = -std::arg(t(j, j));
    if (e <= -kPi) e = kPi;
    phases(j) = e;
  }
  Matrix2 h = q * phases.asDiagonal() * q.adjoint();
  return 0.5 * (h + h.adjoint());
}

Matrix2 shift_block(double k) {
  Matrix2 m = Matrix2::Zero();
  m(0, 0) = std::exp(kI * k);
  m(1, 1) = std::exp(-kI * k);
  return m;
}

Matrix2 t_plus_block(double k) {
  Matrix2 m = Matrix2::Identity();
  m(0, 0) = std::exp(kI * k);
  return m;
}

Matrix2 t_minus_block(double k) {
  Matrix2 m = Matrix2::Identity();
  m(1, 1) = std::exp(-kI * k);
  return m;
}

BlochBlock bloch_block_from_unitary(const Matrix2& unitary, double k, std::optional<double> ky) {
  BlochBlock b;
  b.k = k;
  b.ky = ky;
  b.unitary = unitary;
  b.hamiltonian = su2_log(unitary);
  const auto d = pauli_decompose(b.hamiltonian);
  const double axis = d.vector.norm();
  b.energy = std::min(kPi, std::abs(d.identity) + axis);
  if (std::sin(b.energy) > kGapClosingThreshold && axis > 0.0) b.direction = d.vector / axis;
  return b;
}

BlochBlock bloch_block_oqw(CoinAngle theta, double k) { return bloch_block_from_unitary(coin(theta) * shift_block(k), k); }

double Su2Rotation::energy() const { return std::atan2(scaled_axis.norm(), cos_energy); }

Matrix2 Su2Rotation::unitary() const { return cos_energy * Matrix2::Identity() - kI * pauli_dot(scaled_axis); }

Su2Rotation compose(const Su2Rotation& left, const Su2Rotation& right) {
  Su2Rotation r;
  r.cos_energy = left.cos_energy * right.cos_energy - left.scaled_axis.dot(right.scaled_axis);
  r.scaled_axis = left.cos_energy * right.scaled_axis + right.cos_energy * left.scaled_axis +
                  left.scaled_axis.cross(right.scaled_axis);
  return r;
}

BlochBlock to_bloch_block(const Su2Rotation& r, double k, std::optional<double> ky) {
  BlochBlock b;
  b.k = k;
  b.ky = ky;
  b.unitary = r.unitary();
  b.energy = r.energy();
  const double sin_e = r.scaled_axis.norm();
  if (sin_e > kGapClosingThreshold) {
    b.direction = r.scaled_axis / sin_e;
    b.hamiltonian = b.energy * pauli_dot(*b.direction);
  } else {
    // H is E n.sigma with n undefined; only the E = 0 limit is unambiguous.
    b.hamiltonian = b.energy < kPi / 2 ? Matrix2::Zero() : Matrix2(kPi * Matrix2::Identity());
  }
  return b;
}

Su2Rotation oqw_rotation(CoinAngle theta, double k, WalkFrame frame) {
  const double c = std::cos(theta.radians());
  const double s = std::sin(theta.radians());
  Su2Rotation r;
  r.cos_energy = c * std::cos(k);
  const double first = s * std::sin(k);
  r.scaled_axis = Vector3(frame == WalkFrame::kCoinBeforeShift ? first : -first, s * std::cos(k), -c * std::sin(k));
  return r;
}

Dispersion dispersion_oqw(CoinAngle theta, double k) {
  const double t = theta.radians();
  Dispersion d;
  d.energy = std::acos(std::clamp(std::cos(t) * std::cos(k), -1.0, 1.0));
  const double sin_e = std::sin(d.energy);
  if (sin_e > kGapClosingThreshold) {
    d.direction = Vector3(std::sin(t) * std::sin(k) / sin_e, std::sin(t) * std::cos(k) / sin_e,
                          -std::cos(t) * std::sin(k) / sin_e);
  }
  return d;
}

Su2Rotation ss_rotation(CoinAngle theta1, CoinAngle theta2, double k, WalkFrame frame) {
  return compose(oqw_rotation(theta1, k, frame), oqw_rotation(theta2, k, frame));
}

BlochBlock hamiltonian_ss_closed_form(CoinAngle theta1, CoinAngle theta2, double k, WalkFrame frame) {
  return to_bloch_block(ss_rotation(theta1, theta2, k, frame), k);
}

Matrix2 ss_product_block(CoinAngle theta1, CoinAngle theta2, double k, WalkFrame frame) {
  const Matrix2 d = shift_block(k);
  if (frame == WalkFrame::kCoinBeforeShift) return d * coin(theta1) * d * coin(theta2);
  return coin(theta1) * d * coin(theta2) * d;
}

Matrix2 single_shift_block(CoinAngle theta1, CoinAngle theta2, double q) {
  return coin(theta1) * t_minus_block(q) * coin(theta2) * t_plus_block(q);
}

BlochBlock hamiltonian_2dss_closed_form(CoinAngle theta1, CoinAngle theta2, double kx, double ky) {
  const Su2Rotation axis2 = ss_rotation(0.0, theta1, ky);
  const Su2Rotation axis1 = ss_rotation(theta2, theta1, kx);
  return to_bloch_block(compose(axis2, axis1), kx, ky);
}

Matrix2 ssqw2d_product_block(CoinAngle theta1, CoinAngle theta2, double kx, double ky) {
  const Matrix2 d1 = shift_block(kx);
  const Matrix2 d2 = shift_block(ky);
  const Matrix2 c1 = coin(theta1);
  // Z_2D = S1 S2 C1 S2 C2 S1 C1; conjugating by S1 moves the leading S1 to the end.
  const Matrix2 z2d = d1 * d2 * c1 * d2 * coin(theta2) * d1 * c1;
  return d1.adjoint() * z2d * d1;
}

Matrix2 bch_truncated(const Matrix2& h1, const Matrix2& h2, int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("BCH order must be 1, 2 or 3");
  Matrix2 h = h1 + h2;
  if (order >= 2) h -= 0.5 * kI * commutator(h1, h2);
  if (order >= 3) h -= (commutator(h1, commutator(h1, h2)) + commutator(h2, commutator(h2, h1))) / 12.0;
  return h;
}

std::vector<double> momentum_grid(int resolution) {
  if (resolution < 1) throw std::invalid_argument("k-grid resolution must be positive");
  std::vector<double> ks(static_cast<std::size_t>(resolution));
  for (int j = 0; j < resolution; ++j) ks[static_cast<std::size_t>(j)] = -kPi + 2.0 * kPi * (j + 1) / resolution;
  return ks;
}

Gaps gap(CoinAngle theta1, CoinAngle theta2, int resolution) {
  if (resolution < 64) throw std::invalid_argument("gap scan needs a k-grid of at least 64 points");
  Gaps g{kPi, kPi};
  for (double k : momentum_grid(resolution)) {
    const double e = ss_rotation(theta1, theta2, k).energy();
    g.zero = std::min(g.zero, e);
    g.pi = std::min(g.pi, kPi - e);
  }
  return g;
}

WindingAnalysis winding_analysis(CoinAngle theta1, CoinAngle theta2, int resolution) {
  WindingAnalysis w;
  if (resolution < 64) {
    w.failure = "k-grid resolution below 64";
    return w;
  }
  const auto qs = momentum_grid(resolution);
  std::vector<Vector3> ns;
  ns.reserve(qs.size());
  w.gaps = {kPi, kPi};
  for (double q : qs) {
    // The single-shift block at q is the double-shift block at q/2.
    const Su2Rotation r = ss_rotation(theta1, theta2, q / 2.0);
    const double e = r.energy();
    w.gaps.zero = std::min(w.gaps.zero, e);
    w.gaps.pi = std::min(w.gaps.pi, kPi - e);
    const double len = r.scaled_axis.norm();
    ns.push_back(len > 0.0 ? Vector3(r.scaled_axis / len) : Vector3::Zero());
  }
  const double spacing = 2.0 * kPi / resolution;
  if (w.gaps.zero <= 10.0 * spacing || w.gaps.pi <= 10.0 * spacing) {
    w.failure = "gapless at this resolution";
    return w;
  }

  Eigen::Matrix3d moment = Eigen::Matrix3d::Zero();
  for (const auto& n : ns) moment += n * n.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(moment);
  Vector3 normal = eig.eigenvectors().col(0);
  const double t1 = theta1.radians();
  if (normal.dot(Vector3(-std::cos(t1), 0.0, std::sin(t1))) < 0.0) normal = -normal;
  w.normal = normal;
  for (const auto& n : ns) w.planarity_residual = std::max(w.planarity_residual, std::abs(n.dot(normal)));
  if (w.planarity_residual > 1e-8) {
    w.failure = "Bloch vectors are not planar";
    return w;
  }

  Vector3 e1 = ns.front() - ns.front().dot(normal) * normal;
  e1.normalize();
  const Vector3 e2 = normal.cross(e1);
  double total = 0.0;
  double largest_step = 0.0;
  double previous = std::atan2(ns.back().dot(e2), ns.back().dot(e1));
  for (const auto& n : ns) {
    const double angle = std::atan2(n.dot(e2), n.dot(e1));
    const double step = std::remainder(angle - previous, 2.0 * kPi);
    largest_step = std::max(largest_step, std::abs(step));
    total += step;
    previous = angle;
  }
  w.raw_winding = total / (2.0 * kPi);
  if (largest_step > kPi / 2) {
    w.failure = "k-grid too coarse to follow the Bloch vector";
    return w;
  }
  const double rounded = std::round(w.raw_winding);
  if (std::abs(w.raw_winding - rounded) > 1e-6) {
    w.failure = "winding is not an integer";
    return w;
  }
  w.winding = static_cast<int>(rounded);
  return w;
}

int winding_number(CoinAngle theta1, CoinAngle theta2, int resolution) {
  const auto w = winding_analysis(theta1, theta2, resolution);
  if (!w.winding) throw std::domain_error("winding number undefined: " + w.failure);
  return *w.winding;
}

}  // namespace sswalk
