// Experiment configuration shared by the command-line front end: JSON
// (de)serialization, angle parsing and validation.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace sswalk {

enum class CommandKind { kVerify, kSpectrum, kWalk, kBoundary, kEdge2d, kPhaseDiagram };
enum class OutputFormat { kCsv, kNdjson };

std::string_view command_name(CommandKind kind);
CommandKind parse_command(std::string_view name);
std::string_view format_name(OutputFormat format);
OutputFormat parse_format(std::string_view name);

/// Raised for malformed configuration; the message names the key and value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Radians as a number or a pi fraction: "pi/4", "-3pi/4", "2*pi/3", "pi".
/// The result is normalized into (-pi, pi]. `key` only labels errors.
double parse_angle(std::string_view text, std::string_view key = "angle");

struct ExperimentConfig {
  CommandKind command = CommandKind::kVerify;

  /// verify: claim name or "all".
  std::string claim = "all";
  /// spectrum: "oqw", "ss" or "2d".
  std::string model = "ss";

  double theta1 = 0.7853981633974483;
  double theta2 = 0.39269908169872414;
  /// Right-zone theta2 for two-zone profiles; empty means uniform.
  std::optional<double> theta2_right;

  std::optional<int> n;
  std::optional<int> n2;
  int steps = 25;
  int kgrid = 256;
  int grid = 9;
  double tolerance = 1e-12;
  int window = 5;
  std::optional<int> boundary;
  double smoothing = 0.0;
  /// verify: number of random parameter points drawn from `seed` (0 uses
  /// theta1/theta2 as given).
  int samples = 0;

  std::optional<std::string> out;
  std::optional<OutputFormat> format;
  std::optional<int> threads;
  std::uint64_t seed = 0;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  /// Format used when none was requested: NDJSON for verify, CSV otherwise.
  [[nodiscard]] OutputFormat resolved_format() const;
};

nlohmann::ordered_json to_json(const ExperimentConfig& config);

/// Overlays the keys present in `j` onto `base`. Unknown keys, wrong types
/// and bad values raise ConfigError.
ExperimentConfig apply_json(ExperimentConfig base, const nlohmann::json& j);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Throws ConfigError on the first violated constraint (positive sizes,
/// N present where the command needs it, even sizes for decompositions...).
void validate(const ExperimentConfig& config);

}  // namespace sswalk
