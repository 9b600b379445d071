#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sswalk/cli.hpp"

using namespace sswalk;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const char* env = std::getenv("SSWALK_TEST_TMP");
  fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "sswalk_cli_tests";
  fs::create_directories(dir);
  return dir;
}

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sswalk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("angle parsing") {
    CHECK(parse_angle("pi/4") == doctest::Approx(0.7853981633974483));
    CHECK(parse_angle("-3pi/4") == doctest::Approx(-3 * std::numbers::pi / 4));
    CHECK(parse_angle("2*pi/3") == doctest::Approx(2 * std::numbers::pi / 3));
    CHECK(parse_angle("pi") == doctest::Approx(std::numbers::pi));
    CHECK(parse_angle("-pi") == doctest::Approx(std::numbers::pi));
    CHECK(parse_angle("0.25") == doctest::Approx(0.25));
    CHECK_THROWS_AS(parse_angle("quarter"), ConfigError);
    CHECK_THROWS_AS(parse_angle("pi/0"), ConfigError);
  }

  TEST_CASE("command and format names") {
    for (auto k : {CommandKind::kVerify, CommandKind::kSpectrum, CommandKind::kWalk, CommandKind::kBoundary,
                   CommandKind::kEdge2d, CommandKind::kPhaseDiagram}) {
      CHECK(parse_command(command_name(k)) == k);
    }
    CHECK(parse_format("csv") == OutputFormat::kCsv);
    CHECK_THROWS_AS(parse_format("xml"), ConfigError);
  }

  TEST_CASE("config JSON round-trip") {
    ExperimentConfig c;
    c.command = CommandKind::kBoundary;
    c.n = 48;
    c.theta2_right = 1.5;
    c.boundary = 20;
    c.smoothing = 1.5;
    c.format = OutputFormat::kNdjson;
    c.seed = 99;
    CHECK(config_from_json(nlohmann::json::parse(to_json(c).dump())) == c);
  }

  TEST_CASE("config errors name the key") {
    try {
      (void)config_from_json(nlohmann::json{{"command", "walk"}, {"nn", 4}});
      FAIL("no error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("nn") != std::string::npos);
    }
    CHECK_THROWS_AS((void)config_from_json(nlohmann::json{{"command", "walk"}, {"n", "four"}}), ConfigError);
  }

  TEST_CASE("validation") {
    ExperimentConfig c;
    c.command = CommandKind::kWalk;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.n = 1;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.n = 32;
    CHECK_NOTHROW(validate(c));
    c.command = CommandKind::kEdge2d;
    c.n2 = 20;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.n2 = 52;
    CHECK_NOTHROW(validate(c));
    c.command = CommandKind::kVerify;
    c.n = 7;
    c.claim = "1d-decomposition";
    CHECK_THROWS_AS(validate(c), ConfigError);
  }

  TEST_CASE("missing N exits with a usage error") {
    const auto r = cli({"walk", "--theta1", "pi/4"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK(cli({"teleport"}).code == kExitUsage);
    CHECK(cli({"verify", "--bogus-flag"}).code == kExitUsage);
  }

  TEST_CASE("verify writes NDJSON with a metadata line and exits 0") {
    const auto r = cli({"verify", "--n", "8", "--theta1", "pi/4", "--theta2", "pi/8"});
    CHECK(r.code == kExitSuccess);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 6);
    const auto meta = nlohmann::json::parse(lines[0]);
    CHECK(meta["type"] == "metadata");
    CHECK(meta["config"]["theta1"].get<double>() == doctest::Approx(std::numbers::pi / 4));
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto row = nlohmann::json::parse(lines[i]);
      CHECK(row["passed"] == true);
      CHECK(row["residual"].get<double>() <= 1e-12);
    }
    CHECK(r.err.find("verify:") != std::string::npos);
  }

  TEST_CASE("verify with an unreachable tolerance exits 2") {
    const auto r = cli({"verify", "--claim", "all", "--n", "8", "--tolerance", "1e-16"});
    CHECK(r.code == kExitVerificationFailed);
  }

  TEST_CASE("random verify samples are seeded") {
    const auto a = cli({"verify", "--n", "6", "--samples", "3", "--seed", "4"});
    const auto b = cli({"verify", "--n", "6", "--samples", "3", "--seed", "4"});
    CHECK(a.code == kExitSuccess);
    CHECK(a.out == b.out);
    CHECK(lines_of(a.out).size() == 1 + 3 * 5);
  }

  TEST_CASE("spectrum CSV has a metadata comment and a header") {
    const auto r = cli({"spectrum", "--model", "ss", "--kgrid", "64"});
    REQUIRE(r.code == kExitSuccess);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2 + 64);
    CHECK(lines[0].rfind("# {", 0) == 0);
    CHECK(lines[1] == "theta1,theta2,k,E,n1,n2,n3");
  }

  TEST_CASE("config file is overridden by flags") {
    const auto dir = scratch_dir();
    const auto cfg = dir / "walk.json";
    std::ofstream(cfg) << R"({"command": "walk", "n": 40, "theta1": "pi/4", "theta2": 0.0, "theta2_right": "pi/2", "steps": 3})";
    const auto out = dir / "walk.csv";
    const auto r = cli({"walk", "--config", cfg.string(), "--steps", "4", "--out", out.string()});
    REQUIRE(r.code == kExitSuccess);
    const auto lines = lines_of(slurp(out));
    const auto meta = nlohmann::json::parse(lines[0].substr(2));
    CHECK(meta["config"]["steps"] == 4);
    CHECK(meta["config"]["n"] == 40);
    CHECK(lines.size() == 2 + 5 * 40);
    CHECK(r.out.find("walk:") != std::string::npos);
  }

  TEST_CASE("outputs are deterministic across runs and thread counts") {
    const auto dir = scratch_dir();
    const auto a = dir / "pd_a.csv";
    const auto b = dir / "pd_b.csv";
    REQUIRE(cli({"phasediagram", "--grid", "6", "--kgrid", "64", "--threads", "1", "--out", a.string()}).code == 0);
    REQUIRE(cli({"phasediagram", "--grid", "6", "--kgrid", "64", "--threads", "3", "--out", b.string()}).code == 0);
    const auto sa = slurp(a);
    const auto sb = slurp(b);
    // Metadata differs in the thread count and output path.
    CHECK(sa.substr(sa.find('\n')) == sb.substr(sb.find('\n')));
    REQUIRE(cli({"phasediagram", "--grid", "6", "--kgrid", "64", "--threads", "1", "--out", a.string()}).code == 0);
    CHECK(slurp(a) == sa);
  }

  TEST_CASE("atomic writes leave no temporary files") {
    const auto dir = scratch_dir() / "atomic";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto out = dir / "b.csv";
    REQUIRE(cli({"boundary", "--n", "16", "--theta2", "0", "--theta2-right", "pi/2", "--out", out.string()}).code == 0);
    int entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
    CHECK(entries == 1);
    CHECK(lines_of(slurp(out))[1] == "index,quasienergy,ipr,window_prob,decay_length,flagged");
  }

  TEST_CASE("unwritable output path exits 1") {
    const auto r = cli({"spectrum", "--kgrid", "64", "--out", "/nonexistent_dir_sswalk/x.csv"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("error:") != std::string::npos);
  }

  TEST_CASE("edge2d and invalid thread settings") {
    const auto ok = cli({"edge2d", "--n", "8", "--n2", "12", "--steps", "5", "--theta1", "pi/6", "--theta2", "-pi/2",
                         "--theta2-right", "pi/2"});
    CHECK(ok.code == kExitSuccess);
    CHECK(cli({"spectrum", "--kgrid", "64", "--threads", "0"}).code == kExitUsage);
    ::setenv("SSWALK_THREADS", "zero", 1);
    CHECK(cli({"phasediagram", "--grid", "4", "--kgrid", "64"}).code == kExitUsage);
    ::unsetenv("SSWALK_THREADS");
  }

  TEST_CASE("version flag") {
    const auto r = cli({"--version"});
    CHECK(r.code == kExitSuccess);
    CHECK(r.out.find(SSWALK_VERSION) != std::string::npos);
  }
}
