#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kschur/harness.hpp"

namespace kschur::cli {

// Bad invocation; maps to exit code 64.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --help was given; what() is the text to print.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Analyze, Stream, Forecast, Compare, Synth };

std::string to_string(Command command);

struct CliOptions {
  Command command = Command::Analyze;
  std::string input;
  std::optional<SnapshotFormat> format;  // unset: guess from the extension
  KernelKind kernel = KernelKind::Linear;
  std::optional<double> sigma;
  std::optional<double> tol;
  Index window = 100;
  Index horizon = 40;
  Index steps = 100;
  std::vector<Method> methods = all_methods();
  SchurPreference schur = SchurPreference::Auto;
  std::vector<Index> select;  // 1-based, as given
  std::string weights;
  std::string out = "kschur_out";
  std::optional<std::uint64_t> seed;
  std::optional<double> spurious_threshold;
  bool plots = false;
  bool factors = false;
  unsigned threads = 1;
};

// Flags over config file over defaults. Throws UsageError; a --config file
// that cannot be read raises kschur::Error.
CliOptions parse_options(const std::vector<std::string>& args);

// Text for --help.
std::string usage_text();

// Rejects conflicting or incomplete settings before any computation.
void validate_usage(const CliOptions& options);

ExperimentConfig experiment_config(const CliOptions& options);
SnapshotFormat resolve_format(const CliOptions& options);

// Deterministic JSON echo of the settings that affect results.
std::string effective_config_json(const CliOptions& options);

}  // namespace kschur::cli
