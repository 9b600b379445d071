#include "sswalk/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "sswalk/decomposition.hpp"
#include "sswalk/parallel.hpp"
#include "sswalk/spectral.hpp"
#include "sswalk/toposim.hpp"

namespace sswalk {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

Json direction_json(const std::optional<Vector3>& n, int axis) {
  return n ? Json((*n)(axis)) : Json(nullptr);
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// ---- verify -------------------------------------------------------------------------

std::vector<ClaimId> selected_claims(const std::string& claim) {
  if (claim != "all") return {parse_claim(claim)};
  return {ClaimId::kCyclicProperty, ClaimId::kDecomposition1d, ClaimId::kDecomposition2d, ClaimId::kQPlateIdentity,
          ClaimId::kSingleQPlateScheme};
}

bool needs_half_pi_theta1(ClaimId id) { return id == ClaimId::kQPlateIdentity; }
bool needs_half_pi_theta2(ClaimId id) { return id == ClaimId::kSingleQPlateScheme; }

RunResult run_verify(const ExperimentConfig& c) {
  const int n = c.n.value_or(8);
  const int n2 = c.n2.value_or(n);
  RunResult r;
  r.table.columns = {"claim_id", "theta1", "theta2", "N", "tolerance", "residual", "matched_form", "passed"};
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> full(-kPi, kPi);
  std::uniform_real_distribution<double> half(-kPi / 2, kPi / 2);

  int failed = 0;
  double worst = 0.0;
  for (ClaimId id : selected_claims(c.claim)) {
    const int points = c.samples > 0 ? c.samples : 1;
    for (int s = 0; s < points; ++s) {
      double t1 = c.theta1;
      double t2 = c.theta2;
      if (c.samples > 0) {
        t1 = needs_half_pi_theta1(id) ? half(rng) : full(rng);
        t2 = needs_half_pi_theta2(id) ? half(rng) : full(rng);
      }
      const IdentityReport rep = verify_claim(id, t1, t2, n, n2, c.tolerance);
      Json row;
      row["type"] = "identity";
      row["claim_id"] = claim_name(id);
      row["theta1"] = rep.theta1;
      row["theta2"] = rep.theta2;
      std::string dims;
      for (int d : rep.dims) dims += (dims.empty() ? "" : "x") + std::to_string(d);
      row["N"] = dims;
      row["tolerance"] = rep.tolerance;
      row["residual"] = rep.residual;
      row["matched_form"] = rep.matched_form ? Json(*rep.matched_form) : Json(nullptr);
      row["passed"] = rep.passed();
      Json candidates = Json::array();
      for (const auto& cand : rep.candidates) candidates.push_back({{"form", cand.form}, {"residual", cand.residual}});
      row["candidates"] = std::move(candidates);
      r.table.rows.push_back(std::move(row));
      if (!rep.passed()) ++failed;
      worst = std::max(worst, rep.residual);
    }
  }
  r.verification_failed = failed > 0;
  r.summary = "verify: " + std::to_string(r.table.rows.size()) + " report(s), " + std::to_string(failed) +
              " failed, max residual " + fmt(worst) + " (tolerance " + fmt(c.tolerance) + ")";
  return r;
}

// ---- spectrum -----------------------------------------------------------------------

RunResult run_spectrum(const ExperimentConfig& c) {
  RunResult r;
  const auto ks = momentum_grid(c.kgrid);
  std::size_t closings = 0;
  auto push = [&](double k, std::optional<double> ky, double e, const std::optional<Vector3>& n) {
    Json row;
    row["theta1"] = c.theta1;
    row["theta2"] = c.model == "oqw" ? Json(nullptr) : Json(c.theta2);
    row["k"] = k;
    if (ky) row["ky"] = *ky;
    row["E"] = e;
    for (int a = 0; a < 3; ++a) row["n" + std::to_string(a + 1)] = direction_json(n, a);
    if (!n) ++closings;
    r.table.rows.push_back(std::move(row));
  };
  if (c.model == "2d") {
    r.table.columns = {"theta1", "theta2", "k", "ky", "E", "n1", "n2", "n3"};
    for (double kx : ks) {
      for (double ky : ks) {
        const auto b = hamiltonian_2dss_closed_form(c.theta1, c.theta2, kx, ky);
        push(kx, ky, b.energy, b.direction);
      }
    }
  } else {
    r.table.columns = {"theta1", "theta2", "k", "E", "n1", "n2", "n3"};
    for (double k : ks) {
      if (c.model == "oqw") {
        const auto d = dispersion_oqw(c.theta1, k);
        push(k, std::nullopt, d.energy, d.direction);
      } else {
        const auto b = hamiltonian_ss_closed_form(c.theta1, c.theta2, k);
        push(k, std::nullopt, b.energy, b.direction);
      }
    }
  }
  r.summary = "spectrum: model " + c.model + ", " + std::to_string(r.table.rows.size()) + " k-points, " +
              std::to_string(closings) + " gap closing(s)";
  return r;
}

// ---- trajectories -------------------------------------------------------------------

void push_trajectory(Table& t, const Trajectory& traj) {
  t.columns = {"step", "axis", "site", "probability"};
  for (const auto& rec : traj.steps) {
    for (std::size_t a = 0; a < rec.marginals.size(); ++a) {
      for (std::size_t x = 0; x < rec.marginals[a].size(); ++x) {
        t.rows.push_back({{"step", rec.step}, {"axis", a}, {"site", x}, {"probability", rec.marginals[a][x]}});
      }
    }
  }
}

Complex coin_symmetric_up() { return {1.0 / std::sqrt(2.0), 0.0}; }
Complex coin_symmetric_down() { return {0.0, 1.0 / std::sqrt(2.0)}; }

BoundaryConfig boundary_config(const ExperimentConfig& c) {
  const int n = *c.n;
  if (c.theta2_right) return BoundaryConfig::two_zone(n, c.theta1, c.theta2, *c.theta2_right, c.boundary, c.smoothing);
  auto cfg = BoundaryConfig::uniform(n, c.theta1, c.theta2);
  cfg.boundaries = {c.boundary.value_or(n / 2)};
  return cfg;
}

RunResult run_walk(const ExperimentConfig& c) {
  const BoundaryConfig bc = boundary_config(c);
  const int start = c.boundary.value_or(bc.n / 2);
  const auto g = LatticeGeometry::ring(bc.n);
  const auto psi0 = make_basis_state(g, {start}, coin_symmetric_up(), coin_symmetric_down());
  Observation obs{0, bc.boundaries, c.window, {start}};
  const auto traj = evolve(psi0, build_inhomogeneous_ssqw_factors(bc), c.steps, obs);
  RunResult r;
  push_trajectory(r.table, traj);
  const auto& last = traj.steps.back();
  r.summary = "walk: N=" + std::to_string(bc.n) + ", " + std::to_string(c.steps) + " steps, final window probability " +
              fmt(last.window_probability) + ", final spread " + fmt(last.spread[0]);
  return r;
}

RunResult run_boundary(const ExperimentConfig& c) {
  const BoundaryConfig bc = boundary_config(c);
  DetectorSettings settings;
  settings.window = c.window;
  const auto spec = bound_state_spectrum(build_inhomogeneous_ssqw(bc), bc.boundaries, settings);
  RunResult r;
  r.table.columns = {"index", "quasienergy", "ipr", "window_prob", "decay_length", "flagged"};
  for (std::size_t i = 0; i < spec.modes.size(); ++i) {
    const auto& m = spec.modes[i];
    r.table.rows.push_back({{"index", i},
                            {"quasienergy", m.quasienergy},
                            {"ipr", m.metrics.ipr},
                            {"window_prob", m.metrics.window_probability},
                            {"decay_length", m.metrics.decay_length ? Json(*m.metrics.decay_length) : Json(nullptr)},
                            {"flagged", m.flagged}});
  }
  r.summary = "boundary: N=" + std::to_string(bc.n) + ", " + std::to_string(spec.flagged_indices().size()) +
              " flagged mode(s), reconstruction error " + fmt(spec.reconstruction_error);
  if (spec.zero_mode_splitting) r.summary += ", zero-mode splitting " + fmt(*spec.zero_mode_splitting);
  if (spec.pi_mode_splitting) r.summary += ", pi-mode splitting " + fmt(*spec.pi_mode_splitting);
  return r;
}

RunResult run_edge2d(const ExperimentConfig& c) {
  const int n1 = *c.n;
  const int n2 = *c.n2;
  const int b = c.boundary.value_or(n1 / 2);
  const CoinProfile profile = c.theta2_right
                                  ? CoinProfile::two_zone(n1, c.theta2, *c.theta2_right, c.boundary, c.smoothing)
                                  : CoinProfile::uniform(n1, c.theta2);
  const std::vector<int> interfaces = c.theta2_right ? std::vector<int>{b, 0} : std::vector<int>{b};
  const auto psi0 = make_basis_state(LatticeGeometry::torus(n1, n2), {b, n2 / 2}, coin_symmetric_up(),
                                     coin_symmetric_down());
  const auto traj = edge_state_sim_2d(c.theta1, profile, psi0, c.steps, interfaces, c.window);
  RunResult r;
  push_trajectory(r.table, traj);
  double min_window = 1.0;
  for (const auto& rec : traj.steps) min_window = std::min(min_window, rec.window_probability);
  const auto& last = traj.steps.back();
  r.summary = "edge2d: " + std::to_string(n1) + "x" + std::to_string(n2) + ", " + std::to_string(c.steps) +
              " steps, min axis-1 window probability " + fmt(min_window) + ", final spreads " + fmt(last.spread[0]) +
              " / " + fmt(last.spread[1]);
  return r;
}

RunResult run_phase_diagram(const ExperimentConfig& c) {
  const auto d = phase_diagram_scan(c.grid, c.kgrid, resolve_thread_count(c.threads));
  RunResult r;
  r.table.columns = {"theta1", "theta2", "gap0", "gapPi", "winding"};
  for (const auto& p : d.points) {
    r.table.rows.push_back({{"theta1", p.theta1},
                            {"theta2", p.theta2},
                            {"gap0", p.gaps.zero},
                            {"gapPi", p.gaps.pi},
                            {"winding", p.winding ? Json(*p.winding) : Json(nullptr)}});
  }
  r.summary = "phasediagram: " + std::to_string(c.grid) + "x" + std::to_string(c.grid) + " grid, " +
              std::to_string(find_phase_boundaries(d).size()) + " boundary pair(s)";
  return r;
}

// ---- flag parsing ---------------------------------------------------------------------

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> claim;
  std::optional<std::string> model;
  std::optional<std::string> theta1;
  std::optional<std::string> theta2;
  std::optional<std::string> theta2_right;
  std::optional<int> n;
  std::optional<int> n2;
  std::optional<int> steps;
  std::optional<int> kgrid;
  std::optional<int> grid;
  std::optional<double> tolerance;
  std::optional<int> window;
  std::optional<int> boundary;
  std::optional<double> smoothing;
  std::optional<int> samples;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

void add_flags(CLI::App& sub, Flags& f) {
  sub.add_option("--config", f.config, "JSON configuration file");
  sub.add_option("--out", f.out, "output file (default: stdout)");
  sub.add_option("--format", f.format, "csv or ndjson");
  sub.add_option("--claim", f.claim, "verify: cyclic, 1d-decomposition, 2d-decomposition, qplate, single-qplate, all");
  sub.add_option("--model", f.model, "spectrum: oqw, ss or 2d");
  sub.add_option("--theta1", f.theta1, "coin angle theta1 (radians or pi fraction)");
  sub.add_option("--theta2", f.theta2, "coin angle theta2, left zone for two-zone profiles");
  sub.add_option("--theta2-right", f.theta2_right, "right-zone theta2 of a two-zone profile");
  sub.add_option("--n", f.n, "lattice size N (axis 1)");
  sub.add_option("--n2", f.n2, "lattice size N2 (axis 2)");
  sub.add_option("--steps", f.steps, "number of walk steps");
  sub.add_option("--kgrid", f.kgrid, "momentum grid resolution");
  sub.add_option("--grid", f.grid, "phase-diagram angle grid resolution");
  sub.add_option("--tolerance", f.tolerance, "verification tolerance");
  sub.add_option("--window", f.window, "boundary window half-width in sites");
  sub.add_option("--boundary", f.boundary, "two-zone boundary site");
  sub.add_option("--smoothing", f.smoothing, "linear ramp width of the two-zone profile");
  sub.add_option("--samples", f.samples, "verify: random parameter points drawn from the seed");
  sub.add_option("--threads", f.threads, "worker threads (default: SSWALK_THREADS, then all cores)");
  sub.add_option("--seed", f.seed, "random seed");
}

nlohmann::json flags_json(const Flags& f) {
  nlohmann::json j = nlohmann::json::object();
  auto put = [&](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  put("out", f.out);
  put("format", f.format);
  put("claim", f.claim);
  put("model", f.model);
  put("theta1", f.theta1);
  put("theta2", f.theta2);
  put("theta2_right", f.theta2_right);
  put("n", f.n);
  put("n2", f.n2);
  put("steps", f.steps);
  put("kgrid", f.kgrid);
  put("grid", f.grid);
  put("tolerance", f.tolerance);
  put("window", f.window);
  put("boundary", f.boundary);
  put("smoothing", f.smoothing);
  put("samples", f.samples);
  put("threads", f.threads);
  put("seed", f.seed);
  return j;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed config file '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

}  // namespace

RunResult execute(const ExperimentConfig& config) {
  validate(config);
  switch (config.command) {
    case CommandKind::kVerify: return run_verify(config);
    case CommandKind::kSpectrum: return run_spectrum(config);
    case CommandKind::kWalk: return run_walk(config);
    case CommandKind::kBoundary: return run_boundary(config);
    case CommandKind::kEdge2d: return run_edge2d(config);
    case CommandKind::kPhaseDiagram: return run_phase_diagram(config);
  }
  throw ConfigError("unknown command");
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  RunResult result;
  try {
    result = execute(config);
    write_output(config.out, render(result.table, config.resolved_format(), metadata(config)), out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  (config.out ? out : err) << result.summary << '\n';
  return result.verification_failed ? kExitVerificationFailed : kExitSuccess;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Split-step quantum walk simulator", "sswalk"};
  app.set_version_flag("--version", SSWALK_VERSION);
  app.require_subcommand(1);
  Flags flags;
  const std::array<std::pair<const char*, const char*>, 6> commands = {{
      {"verify", "check operator identities numerically"},
      {"spectrum", "dispersion relations and Bloch vectors"},
      {"walk", "time evolution on a ring"},
      {"boundary", "bound-state spectrum of a two-zone profile"},
      {"edge2d", "edge-state dynamics of the 2D walk"},
      {"phasediagram", "gaps and winding numbers over (theta1, theta2)"},
  }};
  for (const auto& [name, help] : commands) add_flags(*app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  ExperimentConfig config;
  try {
    const std::string command = app.get_subcommands().front()->get_name();
    if (flags.config) config = load_config_file(*flags.config);
    config.command = parse_command(command);
    config = apply_json(config, flags_json(flags));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return run(config, out, err);
}

}  // namespace sswalk
