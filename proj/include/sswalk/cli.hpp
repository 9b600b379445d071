// Command-line front end. The executable is a thin wrapper around run_cli so
// the whole pipeline can be exercised in-process.

#pragma once

#include <iosfwd>
#include <string>

#include "sswalk/config.hpp"
#include "sswalk/output.hpp"

namespace sswalk {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerificationFailed = 2;

struct RunResult {
  Table table;
  std::string summary;
  /// Set by verify when some identity misses its tolerance.
  bool verification_failed = false;
};

/// Runs the pipeline of a validated config without writing anything.
RunResult execute(const ExperimentConfig& config);

/// Validates, executes and writes the output of `config`; returns the exit
/// status. Diagnostics go to `err`; the one-line summary goes to `out`, or to
/// `err` when the results themselves are written to `out`.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Parses `sswalk <command> [flags]`, merges --config with the flags (flags
/// win), and calls run.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sswalk
