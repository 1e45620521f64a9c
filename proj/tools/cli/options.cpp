#include "options.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

namespace kschur::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::pair<std::string, Command>> kCommands = {
    {"analyze", Command::Analyze}, {"stream", Command::Stream},   {"forecast", Command::Forecast},
    {"compare", Command::Compare}, {"synth", Command::Synth},
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char c : text + ",") {
    if (c == ',') {
      const auto b = item.find_first_not_of(" \t");
      if (b != std::string::npos) out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  return out;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  if (names.empty()) throw UsageError("empty method list");
  std::vector<Method> out;
  for (const auto& n : names) {
    try {
      out.push_back(parse_method(n));
    } catch (const Error&) {
      throw UsageError("unknown method '" + n + "' (expected dmd, edmd, ks_ssmd, ks_essmd)");
    }
  }
  return out;
}

std::vector<Index> parse_indices(const std::vector<std::string>& items) {
  std::vector<Index> out;
  for (const auto& s : items) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("bad index '" + s + "' in --select");
    out.push_back(static_cast<Index>(v));
  }
  return out;
}

KernelKind parse_kernel(const std::string& s) {
  if (s == "linear") return KernelKind::Linear;
  if (s == "gaussian") return KernelKind::Gaussian;
  throw UsageError("unknown kernel '" + s + "' (expected linear or gaussian)");
}

SchurPreference parse_schur(const std::string& s) {
  if (s == "auto") return SchurPreference::Auto;
  if (s == "complex") return SchurPreference::Complex;
  if (s == "real") return SchurPreference::Real;
  throw UsageError("unknown Schur form '" + s + "' (expected complex or real)");
}

SnapshotFormat parse_format(const std::string& s) {
  if (s == "csv") return SnapshotFormat::Csv;
  if (s == "raw") return SnapshotFormat::RawF64;
  throw UsageError("unknown format '" + s + "' (expected csv or raw)");
}

std::string schur_name(SchurPreference p) {
  switch (p) {
    case SchurPreference::Complex: return "complex";
    case SchurPreference::Real: return "real";
    case SchurPreference::Auto: break;
  }
  return "auto";
}

// Reads one config key; type errors are usage errors.
template <class T>
T get_as(const Json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw UsageError("config key '" + key + "' has the wrong type");
  }
}

std::vector<std::string> string_list(const Json& j, const std::string& key) {
  if (j.is_string()) return split_list(j.get<std::string>());
  if (!j.is_array()) throw UsageError("config key '" + key + "' must be a list");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(e.is_string() ? e.get<std::string>() : e.dump());
  return out;
}

void apply_config_file(const std::string& path, CliOptions& o) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open config file " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorCode::ParseError, "config file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "input") o.input = get_as<std::string>(v, key);
    else if (key == "format") o.format = parse_format(get_as<std::string>(v, key));
    else if (key == "kernel") o.kernel = parse_kernel(get_as<std::string>(v, key));
    else if (key == "sigma") o.sigma = get_as<double>(v, key);
    else if (key == "tol") o.tol = get_as<double>(v, key);
    else if (key == "window") o.window = get_as<Index>(v, key);
    else if (key == "horizon") o.horizon = get_as<Index>(v, key);
    else if (key == "steps") o.steps = get_as<Index>(v, key);
    else if (key == "methods" || key == "method") o.methods = parse_methods(string_list(v, key));
    else if (key == "schur") o.schur = parse_schur(get_as<std::string>(v, key));
    else if (key == "select") o.select = parse_indices(string_list(v, key));
    else if (key == "weights") o.weights = get_as<std::string>(v, key);
    else if (key == "out") o.out = get_as<std::string>(v, key);
    else if (key == "seed") o.seed = get_as<std::uint64_t>(v, key);
    else if (key == "spurious_threshold") o.spurious_threshold = get_as<double>(v, key);
    else if (key == "plots") o.plots = get_as<bool>(v, key);
    else if (key == "factors") o.factors = get_as<bool>(v, key);
    else throw UsageError("unknown config key '" + key + "'");
  }
}

unsigned thread_budget() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KS_NUM_THREADS")) {
    const std::string s(env);
    unsigned cap = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec != std::errc() || ptr != s.data() + s.size() || cap == 0) {
      throw UsageError("KS_NUM_THREADS must be a positive integer, got '" + s + "'");
    }
    n = std::min(n, cap);
  }
  return n;
}

}  // namespace

std::string to_string(Command command) {
  for (const auto& [name, c] : kCommands) {
    if (c == command) return name;
  }
  return "unknown";
}

std::string usage_text() {
  return "usage: kschur COMMAND [options]\n"
         "\n"
         "commands:\n"
         "  analyze   fit the selected methods on the whole trajectory\n"
         "  stream    sliding-window experiment\n"
         "  forecast  fit on the leading window and predict --horizon steps\n"
         "  compare   side-by-side table of all selected methods\n"
         "  synth     write a synthetic trajectory\n"
         "\n"
         "Run 'kschur COMMAND --help' for the option list. --input accepts a file\n"
         "or a synthetic spec such as synth:rotation:theta=0.3,m=100.\n";
}

CliOptions parse_options(const std::vector<std::string>& args) {
  if (args.empty()) throw UsageError("missing command\n" + usage_text());
  CliOptions o;
  const auto it = std::find_if(kCommands.begin(), kCommands.end(), [&](const auto& p) { return p.first == args[0]; });
  if (it == kCommands.end()) throw UsageError("unknown command '" + args[0] + "'\n" + usage_text());
  o.command = it->second;

  CLI::App app{"kschur " + args[0], "kschur " + args[0]};
  std::string input, format, kernel, methods, schur, select, weights, out, config;
  double sigma = 0.0, tol = 0.0, spurious = 0.0;
  long long window = 0, horizon = 0, steps = 0;
  std::uint64_t seed = 0;
  bool plots = false, factors = false;
  app.add_option("--input", input, "trajectory file or synth:KIND[:k=v,...]");
  app.add_option("--format", format, "input/output snapshot format: csv | raw");
  app.add_option("--kernel", kernel, "linear | gaussian");
  app.add_option("--sigma", sigma, "gaussian bandwidth");
  app.add_option("--tol", tol, "relative truncation tolerance");
  app.add_option("--window", window, "window width w");
  app.add_option("--horizon", horizon, "forecast horizon tau");
  app.add_option("--steps", steps, "number of window slides");
  app.add_option("--method", methods, "comma list of dmd, edmd, ks_ssmd, ks_essmd");
  app.add_option("--schur", schur, "auto | complex | real");
  app.add_option("--select", select, "1-based eigenvalue indices for subset reconstruction");
  app.add_option("--weights", weights, "file with the snapshot weights (Omega diagonal)");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "seed for synthetic input");
  app.add_option("--spurious-threshold", spurious, "flag eigenvalues with modulus above this");
  app.add_option("--config", config, "JSON config file (flags take precedence)");
  app.add_flag("--plots", plots, "write SVG plots (stream)");
  app.add_flag("--factors", factors, "write T and zeta_x (analyze)");

  std::vector<std::string> rest(args.begin() + 1, args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (app.count("--config")) apply_config_file(config, o);
  if (app.count("--input")) o.input = input;
  if (app.count("--format")) o.format = parse_format(format);
  if (app.count("--kernel")) o.kernel = parse_kernel(kernel);
  if (app.count("--sigma")) o.sigma = sigma;
  if (app.count("--tol")) o.tol = tol;
  if (app.count("--window")) o.window = static_cast<Index>(window);
  if (app.count("--horizon")) o.horizon = static_cast<Index>(horizon);
  if (app.count("--steps")) o.steps = static_cast<Index>(steps);
  if (app.count("--method")) o.methods = parse_methods(split_list(methods));
  if (app.count("--schur")) o.schur = parse_schur(schur);
  if (app.count("--select")) o.select = parse_indices(split_list(select));
  if (app.count("--weights")) o.weights = weights;
  if (app.count("--out")) o.out = out;
  if (app.count("--seed")) o.seed = seed;
  if (app.count("--spurious-threshold")) o.spurious_threshold = spurious;
  if (app.count("--plots")) o.plots = plots;
  if (app.count("--factors")) o.factors = factors;
  o.threads = thread_budget();
  return o;
}

void validate_usage(const CliOptions& o) {
  if (o.input.empty()) throw UsageError("--input is required");
  if (o.command == Command::Synth && !is_synthetic_spec(o.input)) {
    throw UsageError("synth needs --input synth:KIND[:key=value,...]");
  }
  if (o.methods.empty()) throw UsageError("empty method list");
  if (std::set<Method>(o.methods.begin(), o.methods.end()).size() != o.methods.size()) {
    throw UsageError("method listed twice");
  }
  const bool any_kernel_method = std::any_of(o.methods.begin(), o.methods.end(), uses_kernel);
  if (o.kernel == KernelKind::Gaussian) {
    if (!o.sigma) throw UsageError("--kernel gaussian requires --sigma");
    if (!(*o.sigma > 0.0)) throw UsageError("--sigma must be positive");
    if (o.command != Command::Synth && !any_kernel_method) {
      throw UsageError("--kernel gaussian has no effect without edmd or ks_essmd");
    }
  } else if (o.sigma) {
    throw UsageError("--sigma only applies to --kernel gaussian");
  }
  if (o.tol && !(*o.tol > 0.0 && *o.tol < 1.0)) throw UsageError("--tol must lie in (0, 1)");
  if (o.window < 2) throw UsageError("--window must be at least 2");
  if (o.horizon < 0) throw UsageError("--horizon must be non-negative");
  if (o.steps < 1) throw UsageError("--steps must be at least 1");
  if (o.spurious_threshold && !(*o.spurious_threshold > 0.0)) {
    throw UsageError("--spurious-threshold must be positive");
  }
  if (!o.select.empty()) {
    if (o.command != Command::Analyze) throw UsageError("--select only applies to analyze");
    if (!std::any_of(o.methods.begin(), o.methods.end(), is_schur_method)) {
      throw UsageError("--select needs ks_ssmd or ks_essmd");
    }
    std::set<Index> seen;
    for (Index i : o.select) {
      if (i < 1) throw UsageError("--select indices are 1-based");
      if (!seen.insert(i).second) throw UsageError("--select lists an index twice");
    }
  }
  if (!o.weights.empty() && o.select.empty()) throw UsageError("--weights requires --select");
  if (o.plots && o.command != Command::Stream) throw UsageError("--plots only applies to stream");
  if (o.factors && o.command != Command::Analyze) throw UsageError("--factors only applies to analyze");
}

ExperimentConfig experiment_config(const CliOptions& o) {
  ExperimentConfig c;
  c.window = o.window;
  c.horizon = o.horizon;
  c.steps = o.steps;
  c.kernel = o.kernel == KernelKind::Gaussian ? KernelSpec::gaussian(o.sigma.value_or(1.0)) : KernelSpec::linear();
  c.truncation_tol = o.tol;
  c.methods = o.methods;
  c.seed = o.seed.value_or(0);
  c.spurious_threshold = o.spurious_threshold;
  c.schur = o.schur;
  c.threads = o.threads;
  return c;
}

SnapshotFormat resolve_format(const CliOptions& o) {
  if (o.format) return *o.format;
  const auto ext = std::filesystem::path(o.input).extension().string();
  return ext == ".raw" || ext == ".f64" || ext == ".bin" ? SnapshotFormat::RawF64 : SnapshotFormat::Csv;
}

std::string effective_config_json(const CliOptions& o) {
  Json j;
  j["command"] = to_string(o.command);
  j["input"] = o.input;
  j["format"] = resolve_format(o) == SnapshotFormat::Csv ? "csv" : "raw";
  j["kernel"] = to_string(o.kernel);
  j["sigma"] = o.sigma ? Json(*o.sigma) : Json(nullptr);
  j["tol"] = o.tol ? Json(*o.tol) : Json(nullptr);
  j["window"] = o.window;
  j["horizon"] = o.horizon;
  j["steps"] = o.steps;
  Json methods = Json::array();
  for (Method m : o.methods) methods.push_back(to_string(m));
  j["methods"] = std::move(methods);
  j["schur"] = schur_name(o.schur);
  j["select"] = o.select;
  j["weights"] = o.weights.empty() ? Json(nullptr) : Json(o.weights);
  j["seed"] = o.seed ? Json(*o.seed) : Json(nullptr);
  j["spurious_threshold"] = o.spurious_threshold ? Json(*o.spurious_threshold) : Json(nullptr);
  j["plots"] = o.plots;
  j["factors"] = o.factors;
  return j.dump(2) + "\n";
}

}  // namespace kschur::cli
