#include "sswalk/core.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace sswalk {

LatticeGeometry::LatticeGeometry(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty() || dims_.size() > 2) {
    throw std::invalid_argument("lattice must have one or two axes, got " +
                                std::to_string(dims_.size()));
  }
  for (int n : dims_) {
    if (n < 2) throw std::invalid_argument("lattice axis needs at least 2 sites, got " + std::to_string(n));
  }
}

int LatticeGeometry::site_count() const noexcept {
  return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
}

int LatticeGeometry::site_index(std::span<const int> site) const {
  if (site.size() != dims_.size()) {
    throw std::out_of_range("site tuple has " + std::to_string(site.size()) + " coordinates, lattice has " +
                            std::to_string(dims_.size()) + " axes");
  }
  int index = 0;
  for (std::size_t a = 0; a < dims_.size(); ++a) {
    if (site[a] < 0 || site[a] >= dims_[a]) {
      throw std::out_of_range("site coordinate " + std::to_string(site[a]) + " outside [0, " +
                              std::to_string(dims_[a]) + ") on axis " + std::to_string(a));
    }
    index = index * dims_[a] + site[a];
  }
  return index;
}

std::vector<int> LatticeGeometry::site_coords(int site) const {
  std::vector<int> coords(dims_.size());
  for (std::size_t a = dims_.size(); a-- > 0;) {
    coords[a] = site % dims_[a];
    site /= dims_[a];
  }
  return coords;
}

int LatticeGeometry::wrap(int axis, int x) const {
  const int n = extent(axis);
  const int r = x % n;
  return r < 0 ? r + n : r;
}

std::string LatticeGeometry::describe() const {
  std::ostringstream os;
  for (std::size_t a = 0; a < dims_.size(); ++a) os << (a ? "x" : "") << dims_[a];
  return os.str();
}

void require_same_geometry(const LatticeGeometry& a, const LatticeGeometry& b, const char* context) {
  if (!(a == b)) {
    throw GeometryMismatch(std::string(context) + ": lattice " + a.describe() + " vs " + b.describe());
  }
}

WalkerState::WalkerState(LatticeGeometry geometry, Vector amplitudes)
    : geometry_(std::move(geometry)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != geometry_.dimension()) {
    throw std::invalid_argument("amplitude vector has length " + std::to_string(amplitudes_.size()) +
                                ", lattice dimension is " + std::to_string(geometry_.dimension()));
  }
  if (std::abs(amplitudes_.norm() - 1.0) > kUnitTolerance) {
    throw std::invalid_argument("walker state is not normalized");
  }
}

WalkerState WalkerState::normalized(LatticeGeometry geometry, Vector amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize a zero state");
  amplitudes /= n;
  return WalkerState(std::move(geometry), std::move(amplitudes));
}

double unitarity_defect(const Matrix& u) {
  const Matrix d = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

PropagatorMatrix::PropagatorMatrix(LatticeGeometry geometry, Matrix matrix)
    : geometry_(std::move(geometry)), matrix_(std::move(matrix)) {
  const auto dim = geometry_.dimension();
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw std::invalid_argument("propagator must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  if (const double defect = sswalk::unitarity_defect(matrix_); defect > kUnitTolerance) {
    throw std::invalid_argument("propagator is not unitary (defect " + std::to_string(defect) + ")");
  }
}

PropagatorMatrix PropagatorMatrix::identity(const LatticeGeometry& geometry) {
  return {geometry, Matrix::Identity(geometry.dimension(), geometry.dimension())};
}

PropagatorMatrix PropagatorMatrix::adjoint() const { return {geometry_, matrix_.adjoint()}; }

double PropagatorMatrix::unitarity_defect() const { return sswalk::unitarity_defect(matrix_); }

WalkerState PropagatorMatrix::apply(const WalkerState& psi) const {
  require_same_geometry(geometry_, psi.geometry(), "apply");
  return WalkerState(WalkerState::Unchecked{}, geometry_, matrix_ * psi.amplitudes());
}

PropagatorMatrix operator*(const PropagatorMatrix& a, const PropagatorMatrix& b) {
  require_same_geometry(a.geometry_, b.geometry_, "operator product");
  return {a.geometry_, a.matrix_ * b.matrix_};
}

WalkerState make_basis_state(const LatticeGeometry& geometry, std::span<const int> site, Complex coin_up,
                             Complex coin_down) {
  const int s = geometry.site_index(site);
  const double norm = std::sqrt(std::norm(coin_up) + std::norm(coin_down));
  if (norm == 0.0) throw std::invalid_argument("coin vector is zero");
  Vector amps = Vector::Zero(geometry.dimension());
  amps(geometry.basis_index(s, 0)) = coin_up / norm;
  amps(geometry.basis_index(s, 1)) = coin_down / norm;
  return WalkerState(geometry, std::move(amps));
}

WalkerState apply(const PropagatorMatrix& u, const WalkerState& psi) { return u.apply(psi); }

std::vector<double> position_distribution(const WalkerState& psi) {
  const auto& amps = psi.amplitudes();
  std::vector<double> p(static_cast<std::size_t>(psi.geometry().site_count()));
  for (std::size_t s = 0; s < p.size(); ++s) {
    p[s] = std::norm(amps(2 * static_cast<Eigen::Index>(s))) + std::norm(amps(2 * static_cast<Eigen::Index>(s) + 1));
  }
  return p;
}

std::vector<double> marginal_distribution(const LatticeGeometry& geometry, std::span<const double> site_probabilities,
                                          int axis) {
  if (axis < 0 || axis >= geometry.rank()) throw std::out_of_range("axis " + std::to_string(axis));
  std::vector<double> m(static_cast<std::size_t>(geometry.extent(axis)), 0.0);
  if (geometry.rank() == 1) {
    m.assign(site_probabilities.begin(), site_probabilities.end());
    return m;
  }
  const int n2 = geometry.extent(1);
  for (std::size_t s = 0; s < site_probabilities.size(); ++s) {
    const int x1 = static_cast<int>(s) / n2;
    const int x2 = static_cast<int>(s) % n2;
    m[static_cast<std::size_t>(axis == 0 ? x1 : x2)] += site_probabilities[s];
  }
  return m;
}

std::vector<double> marginal_distribution(const WalkerState& psi, int axis) {
  const auto p = position_distribution(psi);
  return marginal_distribution(psi.geometry(), p, axis);
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double operator_distance(const Matrix& a, const Matrix& b) { return spectral_norm(a - b); }

double operator_distance(const PropagatorMatrix& a, const PropagatorMatrix& b) {
  require_same_geometry(a.geometry(), b.geometry(), "operator_distance");
  return operator_distance(a.matrix(), b.matrix());
}

double phase_insensitive_distance(const Matrix& a, const Matrix& b) {
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return spectral_norm(a - phase * b);
}

double phase_insensitive_distance(const PropagatorMatrix& a, const PropagatorMatrix& b) {
  require_same_geometry(a.geometry(), b.geometry(), "phase_insensitive_distance");
  return phase_insensitive_distance(a.matrix(), b.matrix());
}

Matrix coin_lift(const LatticeGeometry& geometry, const Matrix2& m) {
  const int dim = geometry.dimension();
  Matrix out = Matrix::Zero(dim, dim);
  for (int s = 0; s < geometry.site_count(); ++s) out.block<2, 2>(2 * s, 2 * s) = m;
  return out;
}

}  // namespace sswalk
