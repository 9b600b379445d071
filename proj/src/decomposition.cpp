#include "sswalk/decomposition.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace sswalk {

namespace {

constexpr Complex kI{0.0, 1.0};

struct Candidate {
  std::string form;
  Matrix rhs;
};

IdentityReport make_report(ClaimId claim, double theta1, double theta2, std::vector<int> dims, double tolerance) {
  IdentityReport r;
  r.claim = claim;
  r.theta1 = theta1;
  r.theta2 = theta2;
  r.dims = std::move(dims);
  r.tolerance = tolerance;
  return r;
}

void score(IdentityReport& report, const Matrix& lhs, const std::vector<Candidate>& candidates, bool allow_phase) {
  std::string matched;
  report.residual = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    const double res = allow_phase ? phase_insensitive_distance(lhs, c.rhs) : operator_distance(lhs, c.rhs);
    report.candidates.push_back({c.form, res});
    report.residual = std::min(report.residual, res);
    if (res <= report.tolerance) matched += (matched.empty() ? "" : " | ") + c.form;
  }
  if (!matched.empty()) report.matched_form = std::move(matched);
}

/// Double-shift walk on one axis of a torus: (C_a) T-^2 (C_b) T+^2.
FactorizedPropagator double_shift_on_axis(const LatticeGeometry& g, int axis, CoinAngle outer, CoinAngle inner) {
  FactorizedPropagator z(g);
  z.then_shift(axis, 2, 0).then_coin(coin(inner)).then_shift(axis, 0, -2).then_coin(coin(outer));
  return z;
}

void require_even_dims(std::initializer_list<int> dims) {
  for (int n : dims) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("decomposition needs even lattice sizes, got " + std::to_string(n));
  }
}

}  // namespace

std::string_view claim_name(ClaimId id) {
  switch (id) {
    case ClaimId::kCyclicProperty: return "cyclic";
    case ClaimId::kDecomposition1d: return "1d-decomposition";
    case ClaimId::kDecomposition2d: return "2d-decomposition";
    case ClaimId::kQPlateIdentity: return "qplate";
    case ClaimId::kSingleQPlateScheme: return "single-qplate";
  }
  return "unknown";
}

ClaimId parse_claim(std::string_view name) {
  for (ClaimId id : {ClaimId::kCyclicProperty, ClaimId::kDecomposition1d, ClaimId::kDecomposition2d,
                     ClaimId::kQPlateIdentity, ClaimId::kSingleQPlateScheme}) {
    if (claim_name(id) == name) return id;
  }
  throw std::invalid_argument("unknown claim '" + std::string(name) + "'");
}

bool IdentityReport::matches(std::string_view form) const {
  if (!matched_form) return false;
  const auto r = residual_of(form);
  return r && *r <= tolerance;
}

std::optional<double> IdentityReport::residual_of(std::string_view form) const {
  for (const auto& c : candidates) {
    if (c.form == form) return c.residual;
  }
  return std::nullopt;
}

IdentityReport verify_cyclic_property(CoinAngle theta, int n, double tolerance) {
  auto report = make_report(ClaimId::kCyclicProperty, theta.radians(), 0.0, {n}, tolerance);
  const Matrix s = shift_s(n).matrix();
  const Matrix z = oqw_step(theta, n).matrix();
  const Matrix zbar = s * coin_lift(LatticeGeometry::ring(n), coin(theta));
  score(report, zbar, {{"S Z(theta) S^dag", s * z * s.adjoint()}}, false);
  return report;
}

IdentityReport verify_1d_decomposition(CoinAngle theta1, CoinAngle theta2, int n, double tolerance) {
  require_even_dims({n});
  auto report = make_report(ClaimId::kDecomposition1d, theta1.radians(), theta2.radians(), {n}, tolerance);
  const Matrix zss = ssqw_double_step(theta1, theta2, n).matrix();
  const Matrix z1 = oqw_step(theta1, n).matrix();
  const Matrix z2 = oqw_step(theta2, n).matrix();
  score(report, zss, {{"Z(theta2) Z(theta1)", z2 * z1}, {"Z(theta1) Z(theta2)", z1 * z2}}, false);
  return report;
}

IdentityReport verify_2d_decomposition(CoinAngle theta1, CoinAngle theta2, int n1, int n2, double tolerance) {
  require_even_dims({n1, n2});
  auto report =
      make_report(ClaimId::kDecomposition2d, theta1.radians(), theta2.radians(), {n1, n2}, tolerance);
  const LatticeGeometry g = LatticeGeometry::torus(n1, n2);
  const Matrix z2d = ssqw2d_step(theta1, theta2, n1, n2).matrix();
  const Matrix axis2 = double_shift_on_axis(g, 1, 0.0, theta1).dense().matrix();
  const Matrix axis1 = double_shift_on_axis(g, 0, theta2, theta1).dense().matrix();

  const std::array<std::pair<std::string, Matrix>, 2> products = {
      std::pair{std::string("Zss2(0,theta1) Zss1(theta2,theta1)"), Matrix(axis2 * axis1)},
      std::pair{std::string("Zss1(theta2,theta1) Zss2(0,theta1)"), Matrix(axis1 * axis2)}};
  const std::array<std::pair<std::string, Matrix>, 4> conjugators = {
      std::pair{std::string("1"), Matrix(Matrix::Identity(g.dimension(), g.dimension()))},
      std::pair{std::string("S1"), s1(n1, n2).matrix()}, std::pair{std::string("S2"), s2(n1, n2).matrix()},
      std::pair{std::string("S3"), s3(n1, n2).matrix()}};

  // The left-hand side is the conjugated Z_2D, the right-hand side the product.
  std::vector<Candidate> candidates;
  for (const auto& [pname, product] : products) {
    for (const auto& [xname, x] : conjugators) {
      if (xname == "1") {
        candidates.push_back({"Z2D = " + pname, product});
        continue;
      }
      // X^dag Z2D X = P  <=>  Z2D = X P X^dag
      candidates.push_back({xname + "^dag Z2D " + xname + " = " + pname, x * product * x.adjoint()});
      candidates.push_back({xname + " Z2D " + xname + "^dag = " + pname, x.adjoint() * product * x});
    }
  }
  score(report, z2d, candidates, false);
  return report;
}

namespace {

std::vector<std::pair<std::string, Matrix2>> coin_basis_changes() {
  const double q = std::numbers::pi / 4.0;
  return {{"1", Matrix2::Identity()},          {"sx", pauli_x()},
          {"sy", pauli_y()},                   {"sz", pauli_z()},
          {"e^{i pi sz/4}", z_phase(-q)},      {"e^{-i pi sz/4}", z_phase(q)}};
}

void require_half_pi_window(CoinAngle theta) {
  if (std::abs(theta.radians()) > std::numbers::pi / 2.0 + 1e-15) {
    throw std::invalid_argument("q-plate retardation pi/2 - theta leaves [0, pi] for theta = " +
                                std::to_string(theta.radians()));
  }
}

QPlateParams half_charge_plate(CoinAngle theta) {
  return {0.5, std::clamp(std::numbers::pi / 2.0 - theta.radians(), 0.0, std::numbers::pi)};
}

}  // namespace

IdentityReport verify_qplate_identity(CoinAngle theta, int n, double tolerance) {
  require_half_pi_window(theta);
  auto report = make_report(ClaimId::kQPlateIdentity, theta.radians(), 0.0, {n}, tolerance);
  const LatticeGeometry g = LatticeGeometry::ring(n);
  const Matrix q = qplate(half_charge_plate(theta), n).matrix();
  const Matrix sx = coin_lift(g, pauli_x());
  const double t = theta.radians();
  const Matrix rhs = -kI * sx * (std::cos(t) * shift_s(n).matrix() + kI * std::sin(t) * sx);

  // Compare (1 (x) B) Q (1 (x) B)^dag against the right-hand side.
  std::vector<Candidate> candidates;
  for (const auto& [name, b] : coin_basis_changes()) {
    const Matrix lift = coin_lift(g, b);
    candidates.push_back({"basis " + name, lift.adjoint() * rhs * lift});
  }
  score(report, q, candidates, true);
  return report;
}

IdentityReport verify_single_qplate_scheme(CoinAngle theta1, CoinAngle theta2, int n, double tolerance) {
  require_half_pi_window(theta2);
  auto report =
      make_report(ClaimId::kSingleQPlateScheme, theta1.radians(), theta2.radians(), {n}, tolerance);
  const LatticeGeometry g = LatticeGeometry::ring(n);
  const Matrix zss = ssqw_step(theta1, theta2, n).matrix();
  const Matrix ctilde = coin_lift(g, smp_tilde_coin(theta1));

  const std::array<std::pair<std::string, PolarizationMapping>, 2> mappings = {
      std::pair{std::string("L=up"), PolarizationMapping::kLeftIsUp},
      std::pair{std::string("L=down"), PolarizationMapping::kLeftIsDown}};
  const std::array<std::pair<std::string, Matrix2>, 4> plates = {
      std::pair{std::string(""), Matrix2(Matrix2::Identity())}, std::pair{std::string("sx "), pauli_x()},
      std::pair{std::string("sy "), pauli_y()}, std::pair{std::string("sz "), pauli_z()}};
  const double quarter = std::numbers::pi / 4.0;
  const std::array<std::pair<std::string, Matrix2>, 3> frames = {
      std::pair{std::string(""), Matrix2(Matrix2::Identity())},
      std::pair{std::string(" conjugated by e^{i pi sz/4}"), z_phase(-quarter)},
      std::pair{std::string(" conjugated by e^{-i pi sz/4}"), z_phase(quarter)}};

  std::vector<Candidate> candidates;
  for (const auto& [fname, frame] : frames) {
    const Matrix v = coin_lift(g, frame);
    for (const auto& [wname, plate] : plates) {
      for (const auto& [mname, mapping] : mappings) {
        const Matrix q = qplate(half_charge_plate(theta2), n, mapping).matrix();
        candidates.push_back(
            {"C~(theta1) " + wname + "Q[" + mname + "]" + fname, v * ctilde * coin_lift(g, plate) * q * v.adjoint()});
      }
    }
  }
  score(report, zss, candidates, true);
  return report;
}

IdentityReport verify_claim(ClaimId claim, double theta1, double theta2, int n, int n2, double tolerance) {
  switch (claim) {
    case ClaimId::kCyclicProperty: return verify_cyclic_property(theta1, n, tolerance);
    case ClaimId::kDecomposition1d: return verify_1d_decomposition(theta1, theta2, n, tolerance);
    case ClaimId::kDecomposition2d: return verify_2d_decomposition(theta1, theta2, n, n2, tolerance);
    case ClaimId::kQPlateIdentity: return verify_qplate_identity(theta1, n, tolerance);
    case ClaimId::kSingleQPlateScheme: return verify_single_qplate_scheme(theta1, theta2, n, tolerance);
  }
  throw std::invalid_argument("unknown claim");
}

}  // namespace sswalk
