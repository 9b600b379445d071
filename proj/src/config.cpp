#include "sswalk/config.hpp"

#include <array>
#include <cmath>
#include <charconv>
#include <regex>
#include <utility>

#include "sswalk/decomposition.hpp"
#include "sswalk/operators.hpp"

namespace sswalk {

namespace {

constexpr std::array<std::pair<CommandKind, std::string_view>, 6> kCommands = {{
    {CommandKind::kVerify, "verify"},
    {CommandKind::kSpectrum, "spectrum"},
    {CommandKind::kWalk, "walk"},
    {CommandKind::kBoundary, "boundary"},
    {CommandKind::kEdge2d, "edge2d"},
    {CommandKind::kPhaseDiagram, "phasediagram"},
}};

[[noreturn]] void bad(std::string_view key, const std::string& value, std::string_view why) {
  throw ConfigError("invalid value for '" + std::string(key) + "': " + value + " (" + std::string(why) + ")");
}

double parse_number(std::string_view text, std::string_view key) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    bad(key, "\"" + s + "\"", "not a number");
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size()) bad(key, "\"" + s + "\"", "not a number");
  return v;
}

int get_int(const nlohmann::json& v, std::string_view key) {
  if (!v.is_number_integer()) bad(key, v.dump(), "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) bad(key, v.dump(), "out of range");
  return static_cast<int>(x);
}

double get_double(const nlohmann::json& v, std::string_view key) {
  if (!v.is_number()) bad(key, v.dump(), "expected a number");
  return v.get<double>();
}

double get_angle(const nlohmann::json& v, std::string_view key) {
  if (v.is_string()) return parse_angle(v.get<std::string>(), key);
  return normalize_angle(get_double(v, key));
}

std::string get_string(const nlohmann::json& v, std::string_view key) {
  if (!v.is_string()) bad(key, v.dump(), "expected a string");
  return v.get<std::string>();
}

template <class T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

void require(bool ok, std::string_view key, const std::string& value, std::string_view why) {
  if (!ok) bad(key, value, why);
}

}  // namespace

std::string_view command_name(CommandKind kind) {
  for (const auto& [k, name] : kCommands) {
    if (k == kind) return name;
  }
  return "unknown";
}

CommandKind parse_command(std::string_view name) {
  for (const auto& [k, n] : kCommands) {
    if (n == name) return k;
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::string_view format_name(OutputFormat format) { return format == OutputFormat::kCsv ? "csv" : "ndjson"; }

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "ndjson") return OutputFormat::kNdjson;
  bad("format", "\"" + std::string(name) + "\"", "expected csv or ndjson");
}

double parse_angle(std::string_view text, std::string_view key) {
  static const std::regex pi_fraction(R"(^\s*([+-]?)\s*(\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+)\s*)?$)",
                                      std::regex::icase);
  const std::string s(text);
  std::smatch m;
  double v = 0.0;
  if (std::regex_match(s, m, pi_fraction)) {
    const double factor = m[2].length() > 0 ? parse_number(m[2].str(), key) : 1.0;
    const double divisor = m[3].matched ? parse_number(m[3].str(), key) : 1.0;
    if (divisor == 0.0) bad(key, "\"" + s + "\"", "division by zero");
    v = (m[1].str() == "-" ? -1.0 : 1.0) * factor * std::numbers::pi / divisor;
  } else {
    v = parse_number(s, key);
  }
  if (!std::isfinite(v)) bad(key, "\"" + s + "\"", "not finite");
  return normalize_angle(v);
}

OutputFormat ExperimentConfig::resolved_format() const {
  if (format) return *format;
  return command == CommandKind::kVerify ? OutputFormat::kNdjson : OutputFormat::kCsv;
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = command_name(c.command);
  j["claim"] = c.claim;
  j["model"] = c.model;
  j["theta1"] = c.theta1;
  j["theta2"] = c.theta2;
  j["theta2_right"] = optional_json(c.theta2_right);
  j["n"] = optional_json(c.n);
  j["n2"] = optional_json(c.n2);
  j["steps"] = c.steps;
  j["kgrid"] = c.kgrid;
  j["grid"] = c.grid;
  j["tolerance"] = c.tolerance;
  j["window"] = c.window;
  j["boundary"] = optional_json(c.boundary);
  j["smoothing"] = c.smoothing;
  j["samples"] = c.samples;
  j["out"] = optional_json(c.out);
  j["format"] = c.format ? nlohmann::ordered_json(format_name(*c.format)) : nlohmann::ordered_json(nullptr);
  j["threads"] = optional_json(c.threads);
  j["seed"] = c.seed;
  return j;
}

ExperimentConfig apply_json(ExperimentConfig c, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object, got " + j.dump());
  for (const auto& [key, v] : j.items()) {
    const bool null = v.is_null();
    if (key == "command") {
      c.command = parse_command(get_string(v, key));
    } else if (key == "claim") {
      c.claim = get_string(v, key);
    } else if (key == "model") {
      c.model = get_string(v, key);
    } else if (key == "theta1") {
      c.theta1 = get_angle(v, key);
    } else if (key == "theta2") {
      c.theta2 = get_angle(v, key);
    } else if (key == "theta2_right") {
      c.theta2_right = null ? std::nullopt : std::optional<double>(get_angle(v, key));
    } else if (key == "n") {
      c.n = null ? std::nullopt : std::optional<int>(get_int(v, key));
    } else if (key == "n2") {
      c.n2 = null ? std::nullopt : std::optional<int>(get_int(v, key));
    } else if (key == "steps") {
      c.steps = get_int(v, key);
    } else if (key == "kgrid") {
      c.kgrid = get_int(v, key);
    } else if (key == "grid") {
      c.grid = get_int(v, key);
    } else if (key == "tolerance") {
      c.tolerance = get_double(v, key);
    } else if (key == "window") {
      c.window = get_int(v, key);
    } else if (key == "boundary") {
      c.boundary = null ? std::nullopt : std::optional<int>(get_int(v, key));
    } else if (key == "smoothing") {
      c.smoothing = get_double(v, key);
    } else if (key == "samples") {
      c.samples = get_int(v, key);
    } else if (key == "out") {
      c.out = null ? std::nullopt : std::optional<std::string>(get_string(v, key));
    } else if (key == "format") {
      c.format = null ? std::nullopt : std::optional<OutputFormat>(parse_format(get_string(v, key)));
    } else if (key == "threads") {
      c.threads = null ? std::nullopt : std::optional<int>(get_int(v, key));
    } else if (key == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        bad(key, v.dump(), "expected a non-negative integer");
      }
      c.seed = v.get<std::uint64_t>();
    } else {
      throw ConfigError("unknown configuration key '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig config_from_json(const nlohmann::json& j) { return apply_json(ExperimentConfig{}, j); }

void validate(const ExperimentConfig& c) {
  const auto str = [](auto v) { return std::to_string(v); };
  if (c.n) require(*c.n >= 2, "n", str(*c.n), "must be at least 2");
  if (c.n2) require(*c.n2 >= 2, "n2", str(*c.n2), "must be at least 2");
  require(c.steps >= 1, "steps", str(c.steps), "must be positive");
  require(c.kgrid >= 1, "kgrid", str(c.kgrid), "must be positive");
  require(c.grid >= 1, "grid", str(c.grid), "must be positive");
  require(c.tolerance > 0.0 && std::isfinite(c.tolerance), "tolerance", str(c.tolerance), "must be positive");
  require(c.window >= 0, "window", str(c.window), "must be non-negative");
  require(c.smoothing >= 0.0 && std::isfinite(c.smoothing), "smoothing", str(c.smoothing), "must be non-negative");
  require(c.samples >= 0, "samples", str(c.samples), "must be non-negative");
  if (c.threads) require(*c.threads >= 1, "threads", str(*c.threads), "must be positive");
  if (c.boundary && c.n) {
    require(*c.boundary >= 1 && *c.boundary <= *c.n - 1, "boundary", str(*c.boundary), "must lie in [1, n-1]");
  }
  for (const auto& [key, v] : {std::pair{"theta1", c.theta1}, std::pair{"theta2", c.theta2}}) {
    require(v > -std::numbers::pi && v <= std::numbers::pi, key, str(v), "must be normalized into (-pi, pi]");
  }

  switch (c.command) {
    case CommandKind::kVerify: {
      if (c.claim != "all") {
        try {
          (void)parse_claim(c.claim);
        } catch (const std::invalid_argument&) {
          bad("claim", "\"" + c.claim + "\"", "unknown claim");
        }
      }
      const int n = c.n.value_or(8);
      const int n2 = c.n2.value_or(n);
      const bool needs_even = c.claim == "all" || c.claim == "1d-decomposition" || c.claim == "2d-decomposition";
      if (needs_even) {
        require(n % 2 == 0, "n", str(n), "decomposition claims need an even N");
        require(n2 % 2 == 0, "n2", str(n2), "decomposition claims need an even N2");
      }
      break;
    }
    case CommandKind::kSpectrum:
      require(c.model == "oqw" || c.model == "ss" || c.model == "2d", "model", "\"" + c.model + "\"",
              "expected oqw, ss or 2d");
      break;
    case CommandKind::kWalk:
    case CommandKind::kBoundary:
      if (!c.n) throw ConfigError("missing required key 'n' for command '" + std::string(command_name(c.command)) + "'");
      break;
    case CommandKind::kEdge2d:
      if (!c.n) throw ConfigError("missing required key 'n' for command 'edge2d'");
      if (!c.n2) throw ConfigError("missing required key 'n2' for command 'edge2d'");
      require(*c.n2 >= 2 * c.steps + 2, "n2", str(*c.n2), "must be at least 2*steps+2");
      break;
    case CommandKind::kPhaseDiagram:
      require(c.kgrid >= 64, "kgrid", str(c.kgrid), "phase diagram needs at least 64 k-points");
      break;
  }
}

}  // namespace sswalk
