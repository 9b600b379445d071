// Dense reference operators built from explicit Kronecker products. They
// share no code with the library's factorized constructors.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;

inline const C kI{0.0, 1.0};

inline M kron(const M& a, const M& b) {
  M out = M::Zero(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != C(0.0)) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline M eye(int n) { return M::Identity(n, n); }

/// |x> -> |x + m mod n>
inline M translation(int n, int m) {
  M f = M::Zero(n, n);
  for (int x = 0; x < n; ++x) f(((x + m) % n + n) % n, x) = 1.0;
  return f;
}

inline M proj_up() {
  M p = M::Zero(2, 2);
  p(0, 0) = 1.0;
  return p;
}

inline M proj_down() {
  M p = M::Zero(2, 2);
  p(1, 1) = 1.0;
  return p;
}

inline M coin(double t) {
  M c(2, 2);
  c << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return c;
}

inline M sigma_x() {
  M s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

inline M sigma_y() {
  M s(2, 2);
  s << 0.0, -kI, kI, 0.0;
  return s;
}

inline M sigma_z() {
  M s(2, 2);
  s << 1.0, 0.0, 0.0, -1.0;
  return s;
}

inline M mpow(const M& a, int k) {
  M out = M::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

// ---- 1D, basis index 2x + c ----------------------------------------------------

inline M lift(int n, const M& c) { return kron(eye(n), c); }
inline M S(int n) { return kron(translation(n, 1), proj_up()) + kron(translation(n, -1), proj_down()); }
inline M Tplus(int n) { return kron(translation(n, 1), proj_up()) + kron(eye(n), proj_down()); }
inline M Tminus(int n) { return kron(eye(n), proj_up()) + kron(translation(n, -1), proj_down()); }
inline M Z(double t, int n) { return lift(n, coin(t)) * S(n); }
inline M Zss(double t1, double t2, int n) { return lift(n, coin(t1)) * Tminus(n) * lift(n, coin(t2)) * Tplus(n); }
inline M Zss_double(double t1, double t2, int n) {
  return lift(n, coin(t1)) * mpow(Tminus(n), 2) * lift(n, coin(t2)) * mpow(Tplus(n), 2);
}

/// Block-diagonal coin with angle t[x] at site x.
inline M site_coin(const std::vector<double>& t) {
  const int n = static_cast<int>(t.size());
  M out = M::Zero(2 * n, 2 * n);
  for (int x = 0; x < n; ++x) out.block(2 * x, 2 * x, 2, 2) = coin(t[static_cast<std::size_t>(x)]);
  return out;
}

inline M Zss_profile(double t1, const std::vector<double>& t2) {
  const int n = static_cast<int>(t2.size());
  return lift(n, coin(t1)) * Tminus(n) * site_coin(t2) * Tplus(n);
}

/// cos(d) - i sin(d) (F_2q (x) |L><R| + h.c.), with |L> = |up> unless left_is_down.
inline M qplate(int two_q, double d, int n, bool left_is_down = false) {
  M lr = M::Zero(2, 2);
  if (left_is_down) {
    lr(1, 0) = 1.0;
  } else {
    lr(0, 1) = 1.0;
  }
  const M f = translation(n, two_q);
  return std::cos(d) * eye(2 * n) - kI * std::sin(d) * (kron(f, lr) + kron(f.adjoint(), lr.adjoint()));
}

// ---- 2D, basis index 2(x1 N2 + x2) + c -----------------------------------------------

inline M S1(int n1, int n2) {
  return kron(translation(n1, 1), kron(eye(n2), proj_up())) + kron(translation(n1, -1), kron(eye(n2), proj_down()));
}
inline M S2(int n1, int n2) {
  return kron(eye(n1), kron(translation(n2, 1), proj_up())) + kron(eye(n1), kron(translation(n2, -1), proj_down()));
}
inline M lift2(int n1, int n2, const M& c) { return kron(eye(n1 * n2), c); }

/// Coin with angle t[x1] on every site of column x1.
inline M coin_along_axis0(const std::vector<double>& t, int n2) {
  const int n1 = static_cast<int>(t.size());
  M out = M::Zero(2 * n1 * n2, 2 * n1 * n2);
  for (int x1 = 0; x1 < n1; ++x1) {
    for (int x2 = 0; x2 < n2; ++x2) {
      const int s = x1 * n2 + x2;
      out.block(2 * s, 2 * s, 2, 2) = coin(t[static_cast<std::size_t>(x1)]);
    }
  }
  return out;
}

/// S3 C1 S2 C2 S1 C1 with S3 = S1 S2.
inline M Z2D(double t1, const std::vector<double>& t2, int n2) {
  const int n1 = static_cast<int>(t2.size());
  const M c1 = lift2(n1, n2, coin(t1));
  const M s1 = S1(n1, n2);
  const M s2 = S2(n1, n2);
  return s1 * s2 * c1 * s2 * coin_along_axis0(t2, n2) * s1 * c1;
}

inline M Z2D(double t1, double t2, int n1, int n2) { return Z2D(t1, std::vector<double>(n1, t2), n2); }

// ---- metrics -----------------------------------------------------------------------------

inline double spectral_norm(const M& a) {
  Eigen::JacobiSVD<M> svd(a);
  return svd.singularValues()(0);
}

/// exp(-i H) for Hermitian H through its eigendecomposition.
inline M expm_hermitian(const M& h) {
  Eigen::SelfAdjointEigenSolver<M> es(h);
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::exp(-kI * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline double random_angle(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(-std::numbers::pi, std::numbers::pi)(rng);
}

}  // namespace oracle
