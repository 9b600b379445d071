#include <doctest.h>

#include <cstdlib>
#include <numbers>
#include <numeric>

#include "edge_regression.hpp"
#include "oracle.hpp"
#include "sswalk/parallel.hpp"
#include "sswalk/toposim.hpp"

using namespace sswalk;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

WalkerState launch_1d(int n, int x) { return make_basis_state(LatticeGeometry::ring(n), {x}, 1.0, kI); }

SpectrumRecord spectrum_of(const BoundaryConfig& c) { return bound_state_spectrum(build_inhomogeneous_ssqw(c), c.boundaries); }

Trajectory edge_run(const CoinProfile& profile, int n1, int x0) {
  using namespace edge_regression;
  const auto psi = make_basis_state(LatticeGeometry::torus(n1, kN2), {x0, kN2 / 2}, 1.0, kI);
  const std::vector<int> interfaces{n1 / 2, 0};
  return edge_state_sim_2d(kPi / 6, profile, psi, kSteps, interfaces, kWindow);
}

}  // namespace

TEST_SUITE("toposim") {
  TEST_CASE("uniform profile reproduces the homogeneous step") {
    const auto c = BoundaryConfig::uniform(10, 0.7, -0.3);
    CHECK(operator_distance(build_inhomogeneous_ssqw(c), ssqw_step(0.7, -0.3, 10)) < 1e-15);
  }

  TEST_CASE("two-zone SSQW is unitary and breaks translation invariance") {
    const auto c = BoundaryConfig::two_zone(16, kPi / 4, -kPi / 2, kPi / 2);
    CHECK(c.boundaries == std::vector<int>{8, 0});
    const auto u = build_inhomogeneous_ssqw(c);
    CHECK(u.unitarity_defect() <= 1e-12);
    const Matrix f = forward_f(16).matrix();
    CHECK(operator_distance(f * u.matrix() * f.adjoint(), u.matrix()) > 0.5);
    CHECK(operator_distance(u.matrix(), oracle::Zss_profile(kPi / 4, [&] {
                              std::vector<double> t;
                              for (auto a : c.theta2.values()) t.push_back(a.radians());
                              return t;
                            }())) < 1e-15);
  }

  TEST_CASE("smoothed profile stays unitary") {
    const auto c = BoundaryConfig::two_zone(24, kPi / 4, -kPi / 2, kPi / 2, std::nullopt, 2.0);
    CHECK(build_inhomogeneous_ssqw(c).unitarity_defect() <= 1e-12);
  }

  TEST_CASE("profile length must match the ring") {
    auto c = BoundaryConfig::uniform(10, 0.7, -0.3);
    c.n = 12;
    CHECK_THROWS_AS(build_inhomogeneous_ssqw(c), std::invalid_argument);
  }

  TEST_CASE("identity evolution keeps the distribution") {
    const auto psi = launch_1d(8, 3);
    const auto traj = evolve(psi, PropagatorMatrix::identity(psi.geometry()), 5, observe_from_peak(psi, 0, 1));
    REQUIRE(traj.step_count() == 5);
    for (const auto& r : traj.steps) {
      CHECK(r.marginals[0] == traj.steps[0].marginals[0]);
      CHECK(r.window_probability == doctest::Approx(1.0));
      CHECK(r.spread[0] == 0.0);
    }
  }

  TEST_CASE("evolve validates its input") {
    const auto psi = launch_1d(8, 3);
    CHECK_THROWS_AS(evolve(psi, oqw_step(0.3, 8), 0, observe_from_peak(psi, 0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(evolve(psi, oqw_step(0.3, 10), 3, observe_from_peak(psi, 0, 1)), GeometryMismatch);
    Observation bad = observe_from_peak(psi, 0, 1);
    bad.origin = {1, 2};
    CHECK_THROWS_AS(evolve(psi, oqw_step(0.3, 8), 3, bad), std::invalid_argument);
  }

  TEST_CASE("no wraparound: support stays inside the light cone") {
    const int steps = 20;
    const int n = 2 * steps + 2;
    const int x0 = n / 2;
    const auto psi = launch_1d(n, x0);
    const auto traj = evolve(psi, oqw_factors(0.4, n), steps, observe_from_peak(psi, 0, 0));
    for (const auto& r : traj.steps) {
      for (int x = 0; x < n; ++x) {
        const int d = x - x0;
        if (std::abs(d) > r.step || (d + r.step) % 2 != 0) CHECK(r.marginals[0][static_cast<std::size_t>(x)] < 1e-30);
      }
    }
  }

  TEST_CASE("homogeneous OQW spreads ballistically") {
    const double theta = kPi / 4;
    const int steps = 80;
    const int n = 2 * steps + 2;
    const auto psi = launch_1d(n, n / 2);
    const auto traj = evolve(psi, oqw_factors(theta, n), steps, observe_from_peak(psi, 0, 0));
    const double v40 = traj.steps[40].spread[0] / 40.0;
    const double v80 = traj.steps[80].spread[0] / 80.0;
    CHECK(std::abs(v80 / v40 - 1.0) < 0.05);
    // The fronts travel at the largest group velocity max_k |dE/dk| = cos(theta).
    const auto& p = traj.steps[80].marginals[0];
    const auto peak = std::max_element(p.begin(), p.end()) - p.begin();
    CHECK(std::abs(std::abs(peak - n / 2) / 80.0 - std::cos(theta)) < 0.1);
    CHECK(v80 < std::cos(theta));
  }

  TEST_CASE("states stay normalized over a thousand steps") {
    const auto c = BoundaryConfig::two_zone(32, kPi / 4, 0.0, kPi / 2);
    const auto psi = launch_1d(32, 16);
    const auto traj = evolve(psi, build_inhomogeneous_ssqw_factors(c), 1000, observe_from_peak(psi, 0, 5));
    double worst = 0.0;
    for (const auto& r : traj.steps) worst = std::max(worst, std::abs(r.norm - 1.0));
    CHECK(worst <= 1e-12);
    CHECK(traj.max_normalization_error() <= 1e-10);
  }

  TEST_CASE("localization metrics of simple distributions") {
    const std::vector<int> centre{10};
    const std::vector<double> uniform(40, 1.0 / 40);
    CHECK(localization_metrics(uniform, centre, 5).ipr == doctest::Approx(1.0 / 40));

    std::vector<double> delta(40, 0.0);
    delta[10] = 1.0;
    const auto m = localization_metrics(delta, centre, 5);
    CHECK(m.ipr == doctest::Approx(1.0));
    CHECK(m.window_probability == doctest::Approx(1.0));
    CHECK(!m.decay_length);
  }

  TEST_CASE("decay length of an exponential profile") {
    const int n = 128;
    const double xi = 3.0;
    std::vector<double> p(n);
    for (int x = 0; x < n; ++x) p[static_cast<std::size_t>(x)] = std::exp(-std::abs(x - 64) / xi);
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= total;
    const auto m = localization_metrics(p, std::vector<int>{64}, 5);
    REQUIRE(m.decay_length);
    CHECK(std::abs(*m.decay_length / xi - 1.0) < 0.05);
  }

  TEST_CASE("degenerate decay fit is reported as empty") {
    const std::vector<double> p(16, 1.0 / 16);
    CHECK(!localization_metrics(p, std::vector<int>{0}, 5).decay_length);
    CHECK_THROWS_AS(localization_metrics(p, std::vector<int>{}, 5), std::invalid_argument);
  }

  TEST_CASE("spectrum record is a faithful eigendecomposition") {
    const auto c = BoundaryConfig::two_zone(64, kPi / 4, 0.0, kPi / 2);
    const auto rec = spectrum_of(c);
    CHECK(rec.modes.size() == 128);
    CHECK(rec.reconstruction_error <= 1e-8);
    CHECK(rec.orthonormality_error <= 1e-8);
    for (const auto& m : rec.modes) {
      CHECK(m.quasienergy > -kPi);
      CHECK(m.quasienergy <= kPi);
    }
  }

  TEST_CASE("homogeneous gapped walk has no bound modes") {
    const std::vector<int> centres{32, 0};
    const auto rec = bound_state_spectrum(ssqw_step(kPi / 4, kPi / 8, 64), centres);
    CHECK(rec.flagged_indices().empty());
  }

  TEST_CASE("interface between distinct phases hosts bound modes") {
    const auto c = BoundaryConfig::two_zone(64, kPi / 4, 0.0, kPi / 2);
    REQUIRE(winding_number(kPi / 4, 0.0, 256) != winding_number(kPi / 4, kPi / 2, 256));
    const auto rec = spectrum_of(c);
    const auto flagged = rec.flagged_indices();
    CHECK(flagged.size() >= 2);
    for (int i : flagged) {
      const auto& m = rec.modes[static_cast<std::size_t>(i)];
      CHECK(std::min(std::abs(m.quasienergy), kPi - std::abs(m.quasienergy)) <= 1e-6);
      CHECK(m.metrics.window_probability >= 0.5);
      REQUIRE(m.metrics.decay_length);
      CHECK(*m.metrics.decay_length < 5.0);
    }
    // One mode per interface: each interface carries close to half of the flagged weight.
    double at_b = 0.0;
    for (int i : flagged) {
      const auto p = position_distribution(rec.eigenstate(i));
      for (int x = 32 - 5; x <= 32 + 5; ++x) at_b += p[static_cast<std::size_t>(x)];
    }
    CHECK(at_b / static_cast<double>(flagged.size()) == doctest::Approx(0.5).epsilon(0.05));
    CHECK(rec.pi_mode_splitting.value_or(0.0) < 1e-6);
  }

  TEST_CASE("same-phase two-zone control has no bound modes") {
    REQUIRE(winding_number(kPi / 4, -kPi / 8, 256) == winding_number(kPi / 4, kPi / 8, 256));
    CHECK(spectrum_of(BoundaryConfig::two_zone(64, kPi / 4, -kPi / 8, kPi / 8)).flagged_indices().empty());
  }

  TEST_CASE("bound-state count is translation covariant") {
    const auto base = BoundaryConfig::two_zone(48, kPi / 3, 0.0, kPi / 2);
    const auto count = spectrum_of(base).flagged_indices().size();
    REQUIRE(count > 0);
    for (int offset : {1, 7, 20}) {
      BoundaryConfig moved{48, base.theta1, base.theta2.rotated(offset), {24 + offset, offset}, 0.0};
      CHECK(spectrum_of(moved).flagged_indices().size() == count);
    }
  }

  TEST_CASE("flagged eigenmodes are stationary") {
    const auto c = BoundaryConfig::two_zone(64, kPi / 4, 0.0, kPi / 2);
    const auto rec = spectrum_of(c);
    REQUIRE(!rec.flagged_indices().empty());
    const auto psi = rec.eigenstate(rec.flagged_indices().front());
    Observation obs{0, c.boundaries, 5, {32}};
    const auto traj = evolve(psi, build_inhomogeneous_ssqw(c), 100, obs);
    for (const auto& r : traj.steps) {
      CHECK(std::abs(r.window_probability - traj.steps[0].window_probability) < 1e-8);
    }
  }

  TEST_CASE("smoothed interfaces still localize modes near 0 or pi") {
    const auto c = BoundaryConfig::two_zone(64, kPi / 4, 0.0, kPi / 2, std::nullopt, 2.0);
    DetectorSettings loose;
    loose.energy_tolerance = 1e-3;
    const auto rec = bound_state_spectrum(build_inhomogeneous_ssqw(c), c.boundaries, loose);
    CHECK(!rec.flagged_indices().empty());
  }

  TEST_CASE("edge state stays at the interface while spreading along it") {
    const auto traj = edge_run(CoinProfile::two_zone(32, -kPi / 2, kPi / 2), 32, 16);
    for (std::size_t t = 0; t < traj.steps.size(); ++t) {
      CAPTURE(t);
      CHECK(traj.steps[t].window_probability >= edge_regression::kWindowFloor);
      if (t > 0) CHECK(traj.steps[t].spread[1] > traj.steps[t - 1].spread[1]);
    }
    CHECK(traj.steps.back().spread[0] < edge_regression::kBoundaryAxis0SpreadCeiling);
    CHECK(traj.steps.back().spread[1] > edge_regression::kAxis1SpreadFloor);
  }

  TEST_CASE("uniform 2D control spreads on both axes") {
    const auto traj = edge_run(CoinProfile::uniform(32, kPi / 2), 32, 16);
    CHECK(traj.steps.back().spread[0] > edge_regression::kControlAxis0SpreadFloor);
    CHECK(traj.steps.back().spread[1] > edge_regression::kAxis1SpreadFloor);
    for (std::size_t t = 1; t < traj.steps.size(); ++t) CHECK(traj.steps[t].spread[1] > traj.steps[t - 1].spread[1]);
  }

  TEST_CASE("walker launched away from the interface starts outside the window") {
    const auto far = edge_run(CoinProfile::two_zone(64, -kPi / 2, kPi / 2), 64, 16);
    const auto near = edge_run(CoinProfile::two_zone(64, -kPi / 2, kPi / 2), 64, 32);
    for (int t = 0; t <= 8; ++t) CHECK(far.steps[static_cast<std::size_t>(t)].window_probability < 0.01);
    for (std::size_t t = 0; t < far.steps.size(); ++t) {
      CAPTURE(t);
      CHECK(far.steps[t].window_probability < near.steps[t].window_probability);
    }
  }

  TEST_CASE("edge simulation validates sizes") {
    const auto psi = make_basis_state(LatticeGeometry::torus(8, 10), {4, 5}, 1.0, 0.0);
    const std::vector<int> ifs{4, 0};
    CHECK_THROWS_AS(edge_state_sim_2d(0.5, CoinProfile::uniform(8, 0.1), psi, 5, ifs), std::invalid_argument);
    CHECK_THROWS_AS(edge_state_sim_2d(0.5, CoinProfile::uniform(6, 0.1), psi, 4, ifs), GeometryMismatch);
    CHECK_NOTHROW(edge_state_sim_2d(0.5, CoinProfile::uniform(8, 0.1), psi, 4, ifs));
  }

  TEST_CASE("angle grid") {
    const auto g = angle_grid(4);
    CHECK(g == std::vector<double>{-kPi / 2, 0.0, kPi / 2, kPi});
  }

  TEST_CASE("phase diagram gaps close along predicted curves at theta1 = 0") {
    const auto d = phase_diagram_scan(16, 256);
    const auto angles = angle_grid(16);
    const int zero_row = 7;
    REQUIRE(angles[zero_row] == doctest::Approx(0.0));
    for (int j = 0; j < 16; ++j) {
      const double t2 = angles[static_cast<std::size_t>(j)];
      // At theta1 = 0, cos E = cos(theta2) cos(2k).
      const double predicted = std::acos(std::abs(std::cos(t2)));
      CHECK(d.at(zero_row, j).gaps.zero == doctest::Approx(predicted).epsilon(1e-9));
      CHECK(d.at(zero_row, j).gaps.pi == doctest::Approx(predicted).epsilon(1e-9));
    }
  }

  TEST_CASE("winding is constant within gapped regions") {
    const auto d = phase_diagram_scan(16, 1024, 2);
    int defined = 0;
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 16; ++j) {
        const auto& a = d.at(i, j);
        if (!a.winding) continue;
        ++defined;
        for (const auto& b : {d.at((i + 1) % 16, j), d.at(i, (j + 1) % 16)}) {
          if (b.winding) CHECK(*a.winding == *b.winding);
        }
      }
    }
    CHECK(defined > 100);
    CHECK(!find_phase_boundaries(d).empty());
  }

  TEST_CASE("phase diagram is independent of the thread count") {
    const auto a = phase_diagram_scan(8, 128, 1);
    const auto b = phase_diagram_scan(8, 128, 3);
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      CHECK(a.points[i].gaps.zero == b.points[i].gaps.zero);
      CHECK(a.points[i].winding == b.points[i].winding);
    }
  }

  TEST_CASE("phase diagram feeds the bound-state detector") {
    const auto d = phase_diagram_scan(16, 1024);
    const auto pair = best_two_zone_pair(d);
    REQUIRE(pair);
    CHECK(pair->left.theta1 == pair->right.theta1);
    CHECK(*pair->left.winding != *pair->right.winding);
    const auto c = BoundaryConfig::two_zone(64, pair->left.theta1, pair->left.theta2, pair->right.theta2);
    CHECK(!spectrum_of(c).flagged_indices().empty());
  }

  TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [](std::size_t i) {
                                   if (i == 5) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
  }

  TEST_CASE("thread count resolution") {
    CHECK(resolve_thread_count(3) == 3);
    CHECK_THROWS_AS(resolve_thread_count(0), std::invalid_argument);
    ::setenv("SSWALK_THREADS", "5", 1);
    CHECK(resolve_thread_count() == 5);
    ::setenv("SSWALK_THREADS", "two", 1);
    CHECK_THROWS_AS(resolve_thread_count(), std::invalid_argument);
    ::unsetenv("SSWALK_THREADS");
    CHECK(resolve_thread_count() >= 1);
  }
}
