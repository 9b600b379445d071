#include "sswalk/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sswalk {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_ring(int n) {
  if (n < 2) throw std::invalid_argument("ring needs at least 2 sites, got " + std::to_string(n));
}

void require_even(int n, const char* what) {
  if (n % 2 != 0) {
    throw std::invalid_argument(std::string(what) + " needs an even number of sites, got " + std::to_string(n));
  }
}

/// Dense F^m on a ring: |x> -> |x+m>.
Matrix ring_translation(int n, int m) {
  Matrix f = Matrix::Zero(n, n);
  for (int x = 0; x < n; ++x) f(((x + m) % n + n) % n, x) = 1.0;
  return f;
}

Matrix kron(const Matrix& a, const Matrix2& b) {
  Matrix out(a.rows() * 2, a.cols() * 2);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  }
  return out;
}

}  // namespace

double normalize_angle(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(radians, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

// ---- CoinProfile ----------------------------------------------------------------

CoinProfile::CoinProfile(std::vector<CoinAngle> thetas) : thetas_(std::move(thetas)) {
  if (thetas_.size() < 2) throw std::invalid_argument("coin profile needs at least 2 sites");
}

CoinProfile CoinProfile::uniform(int n, CoinAngle theta) {
  require_ring(n);
  return CoinProfile(std::vector<CoinAngle>(static_cast<std::size_t>(n), theta));
}

CoinProfile CoinProfile::two_zone(int n, CoinAngle left, CoinAngle right, std::optional<int> boundary,
                                  double smoothing) {
  require_ring(n);
  const int b = boundary.value_or(n / 2);
  if (b < 1 || b > n - 1) {
    throw std::invalid_argument("two-zone boundary " + std::to_string(b) + " must lie in [1, " +
                                std::to_string(n - 1) + "]");
  }
  if (smoothing < 0.0) throw std::invalid_argument("smoothing width must be non-negative");
  std::vector<CoinAngle> thetas;
  thetas.reserve(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    // Signed distance from the nearest interface, positive inside the right zone.
    const double u = x >= b ? std::min(x - b + 0.5, n - x - 0.5) : -std::min(b - x - 0.5, x + 0.5);
    double weight = u > 0 ? 1.0 : 0.0;
    if (smoothing > 0.0) weight = std::clamp(0.5 + u / smoothing, 0.0, 1.0);
    thetas.emplace_back(left.radians() + weight * (right.radians() - left.radians()));
  }
  return CoinProfile(std::move(thetas));
}

bool CoinProfile::is_uniform() const {
  return std::all_of(thetas_.begin(), thetas_.end(), [&](CoinAngle t) { return t == thetas_.front(); });
}

CoinProfile CoinProfile::rotated(int offset) const {
  const int n = size();
  std::vector<CoinAngle> out(thetas_.size());
  for (int x = 0; x < n; ++x) out[static_cast<std::size_t>(((x + offset) % n + n) % n)] = thetas_[static_cast<std::size_t>(x)];
  return CoinProfile(std::move(out));
}

// ---- QPlateParams ---------------------------------------------------------------

QPlateParams::QPlateParams(double q, double delta) : q_(q), delta_(delta), oam_step_(0) {
  const double twice = 2.0 * q;
  if (std::abs(twice - std::round(twice)) > 1e-12) {
    throw std::invalid_argument("q-plate charge must be a half-integer, got " + std::to_string(q));
  }
  if (delta < 0.0 || delta > std::numbers::pi) {
    throw std::invalid_argument("q-plate retardation must lie in [0, pi], got " + std::to_string(delta));
  }
  oam_step_ = static_cast<int>(std::lround(twice));
}

// ---- 2x2 ------------------------------------------------------------------------

Matrix2 pauli_x() {
  Matrix2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix2 pauli_y() {
  Matrix2 m;
  m << 0.0, -kI, kI, 0.0;
  return m;
}

Matrix2 pauli_z() {
  Matrix2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Matrix2 z_phase(double a) {
  Matrix2 m = Matrix2::Zero();
  m(0, 0) = std::exp(-kI * a);
  m(1, 1) = std::exp(kI * a);
  return m;
}

Matrix2 coin(CoinAngle theta) {
  const double c = std::cos(theta.radians());
  const double s = std::sin(theta.radians());
  Matrix2 m;
  m << c, -s, s, c;
  return m;
}

Matrix2 smp_tilde_coin(CoinAngle theta1) {
  const double quarter = std::numbers::pi / 4.0;
  return z_phase(quarter) * coin(theta1) * pauli_x() * z_phase(-quarter);
}

// ---- FactorizedPropagator ---------------------------------------------------------

FactorizedPropagator::FactorizedPropagator(LatticeGeometry geometry) : geometry_(std::move(geometry)) {}

FactorizedPropagator& FactorizedPropagator::then_coin(const Matrix2& m) {
  layers_.emplace_back(CoinLayer{0, {m}});
  return *this;
}

FactorizedPropagator& FactorizedPropagator::then_coin(const CoinProfile& profile, int axis) {
  std::vector<Matrix2> blocks;
  blocks.reserve(profile.values().size());
  for (CoinAngle t : profile.values()) blocks.push_back(coin(t));
  return then_coin_blocks(std::move(blocks), axis);
}

FactorizedPropagator& FactorizedPropagator::then_coin_blocks(std::vector<Matrix2> blocks, int axis) {
  if (axis < 0 || axis >= geometry_.rank()) throw std::out_of_range("coin axis " + std::to_string(axis));
  if (blocks.size() != 1 && static_cast<int>(blocks.size()) != geometry_.extent(axis)) {
    throw std::invalid_argument("coin profile has " + std::to_string(blocks.size()) + " entries, axis " +
                                std::to_string(axis) + " has " + std::to_string(geometry_.extent(axis)) + " sites");
  }
  layers_.emplace_back(CoinLayer{axis, std::move(blocks)});
  return *this;
}

FactorizedPropagator& FactorizedPropagator::then_shift(int axis, int up, int down) {
  if (axis < 0 || axis >= geometry_.rank()) throw std::out_of_range("shift axis " + std::to_string(axis));
  layers_.emplace_back(ShiftLayer{axis, up, down});
  return *this;
}

FactorizedPropagator& FactorizedPropagator::then(const FactorizedPropagator& next) {
  require_same_geometry(geometry_, next.geometry_, "operator product");
  layers_.insert(layers_.end(), next.layers_.begin(), next.layers_.end());
  return *this;
}

FactorizedPropagator operator*(const FactorizedPropagator& a, const FactorizedPropagator& b) {
  FactorizedPropagator out = b;
  out.then(a);
  return out;
}

void FactorizedPropagator::apply_layer(const Layer& layer, Eigen::Ref<Matrix> columns) const {
  const int sites = geometry_.site_count();
  const int n2 = geometry_.rank() == 2 ? geometry_.extent(1) : 1;
  auto coordinate = [&](int site, int axis) { return geometry_.rank() == 1 ? site : (axis == 0 ? site / n2 : site % n2); };

  if (const auto* c = std::get_if<CoinLayer>(&layer)) {
    for (int s = 0; s < sites; ++s) {
      const Matrix2& m = c->blocks.size() == 1 ? c->blocks.front()
                                                : c->blocks[static_cast<std::size_t>(coordinate(s, c->axis))];
      auto rows = columns.middleRows(2 * s, 2);
      rows = (m * rows).eval();
    }
    return;
  }

  const auto& sh = std::get<ShiftLayer>(layer);
  Matrix out(columns.rows(), columns.cols());
  for (int s = 0; s < sites; ++s) {
    auto target = [&](int delta) {
      if (geometry_.rank() == 1) return geometry_.wrap(0, s + delta);
      int x1 = s / n2;
      int x2 = s % n2;
      if (sh.axis == 0) {
        x1 = geometry_.wrap(0, x1 + delta);
      } else {
        x2 = geometry_.wrap(1, x2 + delta);
      }
      return x1 * n2 + x2;
    };
    out.row(2 * target(sh.up)) = columns.row(2 * s);
    out.row(2 * target(sh.down) + 1) = columns.row(2 * s + 1);
  }
  columns = out;
}

Vector FactorizedPropagator::apply(const Vector& amplitudes) const {
  if (amplitudes.size() != geometry_.dimension()) {
    throw GeometryMismatch("state of length " + std::to_string(amplitudes.size()) + " on lattice " +
                           geometry_.describe());
  }
  Matrix work = amplitudes;
  for (const auto& layer : layers_) apply_layer(layer, work);
  return work.col(0);
}

WalkerState FactorizedPropagator::apply(const WalkerState& psi) const {
  require_same_geometry(geometry_, psi.geometry(), "apply");
  return WalkerState(WalkerState::Unchecked{}, geometry_, apply(psi.amplitudes()));
}

PropagatorMatrix FactorizedPropagator::dense() const {
  Matrix work = Matrix::Identity(geometry_.dimension(), geometry_.dimension());
  for (const auto& layer : layers_) apply_layer(layer, work);
  return {geometry_, std::move(work)};
}

// ---- 1D ----------------------------------------------------------------------------

FactorizedPropagator forward_f_factors(int n) {
  require_ring(n);
  return std::move(FactorizedPropagator(LatticeGeometry::ring(n)).then_shift(0, 1, 1));
}

FactorizedPropagator shift_s_factors(int n) {
  require_ring(n);
  return std::move(FactorizedPropagator(LatticeGeometry::ring(n)).then_shift(0, 1, -1));
}

FactorizedPropagator t_plus_factors(int n) {
  require_ring(n);
  return std::move(FactorizedPropagator(LatticeGeometry::ring(n)).then_shift(0, 1, 0));
}

FactorizedPropagator t_minus_factors(int n) {
  require_ring(n);
  return std::move(FactorizedPropagator(LatticeGeometry::ring(n)).then_shift(0, 0, -1));
}

PropagatorMatrix forward_f(int n) { return forward_f_factors(n).dense(); }
PropagatorMatrix shift_s(int n) { return shift_s_factors(n).dense(); }
PropagatorMatrix t_plus(int n) { return t_plus_factors(n).dense(); }
PropagatorMatrix t_minus(int n) { return t_minus_factors(n).dense(); }

FactorizedPropagator oqw_factors(CoinAngle theta, int n) {
  require_ring(n);
  FactorizedPropagator z(LatticeGeometry::ring(n));
  z.then_shift(0, 1, -1).then_coin(coin(theta));
  return z;
}

PropagatorMatrix oqw_step(CoinAngle theta, int n) { return oqw_factors(theta, n).dense(); }

FactorizedPropagator ssqw_factors(CoinAngle theta1, const CoinProfile& theta2) {
  FactorizedPropagator z(LatticeGeometry::ring(theta2.size()));
  z.then_shift(0, 1, 0).then_coin(theta2, 0).then_shift(0, 0, -1).then_coin(coin(theta1));
  return z;
}

PropagatorMatrix ssqw_step(CoinAngle theta1, CoinAngle theta2, int n) {
  require_ring(n);
  return ssqw_factors(theta1, CoinProfile::uniform(n, theta2)).dense();
}

FactorizedPropagator ssqw_double_factors(CoinAngle theta1, CoinAngle theta2, int n) {
  require_ring(n);
  require_even(n, "double-shift SSQW");
  FactorizedPropagator z(LatticeGeometry::ring(n));
  z.then_shift(0, 2, 0).then_coin(coin(theta2)).then_shift(0, 0, -2).then_coin(coin(theta1));
  return z;
}

PropagatorMatrix ssqw_double_step(CoinAngle theta1, CoinAngle theta2, int n) {
  return ssqw_double_factors(theta1, theta2, n).dense();
}

PropagatorMatrix qplate(const QPlateParams& params, int n, PolarizationMapping mapping) {
  require_ring(n);
  const int m = params.oam_step();
  if (std::abs(m) >= n) {
    throw std::invalid_argument("q-plate OAM jump " + std::to_string(m) + " aliases on a ring of " +
                                std::to_string(n) + " sites");
  }
  const int left = mapping == PolarizationMapping::kLeftIsUp ? 0 : 1;
  const int right = 1 - left;
  Matrix2 left_right = Matrix2::Zero();  // |L><R|
  left_right(left, right) = 1.0;
  const Matrix f = ring_translation(n, m);
  const double delta = params.retardation();
  Matrix q = std::cos(delta) * Matrix::Identity(2 * n, 2 * n) -
             kI * std::sin(delta) * (kron(f, left_right) + kron(f.adjoint(), left_right.adjoint()));
  return {LatticeGeometry::ring(n), std::move(q)};
}

PropagatorMatrix site_dependent_coin(const CoinProfile& profile, int axis, const LatticeGeometry& geometry) {
  FactorizedPropagator c(geometry);
  c.then_coin(profile, axis);
  return c.dense();
}

// ---- 2D --------------------------------------------------------------------------------

FactorizedPropagator conditional_shift_factors(const LatticeGeometry& geometry, int axis, int up, int down) {
  return std::move(FactorizedPropagator(geometry).then_shift(axis, up, down));
}

PropagatorMatrix s1(int n1, int n2) {
  return conditional_shift_factors(LatticeGeometry::torus(n1, n2), 0, 1, -1).dense();
}

PropagatorMatrix s2(int n1, int n2) {
  return conditional_shift_factors(LatticeGeometry::torus(n1, n2), 1, 1, -1).dense();
}

PropagatorMatrix s3(int n1, int n2) {
  FactorizedPropagator s(LatticeGeometry::torus(n1, n2));
  s.then_shift(1, 1, -1).then_shift(0, 1, -1);
  return s.dense();
}

FactorizedPropagator ssqw2d_factors(CoinAngle theta1, const CoinProfile& theta2_axis0, int n2) {
  FactorizedPropagator z(LatticeGeometry::torus(theta2_axis0.size(), n2));
  const Matrix2 c1 = coin(theta1);
  z.then_coin(c1).then_shift(0, 1, -1);                            // S1 C1
  z.then_coin(theta2_axis0, 0).then_shift(1, 1, -1);               // S2 C2
  z.then_coin(c1).then_shift(1, 1, -1).then_shift(0, 1, -1);      // S3 C1
  return z;
}

PropagatorMatrix ssqw2d_step(CoinAngle theta1, CoinAngle theta2, int n1, int n2) {
  require_ring(n1);
  require_ring(n2);
  return ssqw2d_factors(theta1, CoinProfile::uniform(n1, theta2), n2).dense();
}

// ---- generalized SMP ------------------------------------------------------------------

SmpRadii generalized_smp_radii(int l_cut, double beam_width) {
  if (!(beam_width > 0.0)) throw std::invalid_argument("beam width must be positive");
  if (l_cut < 0) throw std::invalid_argument("OAM cutoff must be non-negative");
  SmpRadii r;
  for (int l = 0; l <= l_cut + 1; ++l) r.ring_radius.push_back(beam_width * std::sqrt(l / 2.0));
  r.boundary_radius = 0.5 * (r.ring_radius[static_cast<std::size_t>(l_cut)] +
                             r.ring_radius[static_cast<std::size_t>(l_cut) + 1]);
  return r;
}

int oam_of_site(int site, int n) { return site <= (n - 1) / 2 ? site : site - n; }

CoinProfile generalized_smp_profile(int n, int l_cut, double beam_width, CoinAngle inner, CoinAngle outer,
                                    double smoothing) {
  require_ring(n);
  if (smoothing < 0.0) throw std::invalid_argument("smoothing width must be non-negative");
  const SmpRadii radii = generalized_smp_radii(l_cut, beam_width);
  std::vector<CoinAngle> thetas;
  thetas.reserve(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    const int l = std::abs(oam_of_site(x, n));
    const double r = beam_width * std::sqrt(l / 2.0);
    double weight = r < radii.boundary_radius ? 0.0 : 1.0;
    if (smoothing > 0.0) weight = std::clamp(0.5 + (l - (l_cut + 0.5)) / smoothing, 0.0, 1.0);
    thetas.emplace_back(inner.radians() + weight * (outer.radians() - inner.radians()));
  }
  return CoinProfile(std::move(thetas));
}

}  // namespace sswalk
