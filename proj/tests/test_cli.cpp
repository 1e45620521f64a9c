#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cli/commands.hpp"
#include "kschur/harness.hpp"

namespace fs = std::filesystem;
using kschur::cli::run_cli;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("kschur_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') {
        quoted = !quoted;
      } else if (c == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell.push_back(c);
      }
    }
    cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::vector<std::complex<double>> parse_pair_list(const std::string& s) {
  std::vector<std::complex<double>> out;
  std::size_t at = 0;
  while ((at = s.find('(', at)) != std::string::npos) {
    const std::size_t comma = s.find(',', at), close = s.find(')', at);
    out.emplace_back(std::stod(s.substr(at + 1, comma - at - 1)), std::stod(s.substr(comma + 1, close - comma - 1)));
    at = close;
  }
  return out;
}

double distance_to(const std::vector<std::complex<double>>& got, std::complex<double> target) {
  double best = INFINITY;
  for (const auto& z : got) best = std::min(best, std::abs(z - target));
  return best;
}

// Tag balance, quoted attributes and a single root element.
bool well_formed_xml(const std::string& s) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  int roots = 0;
  while ((i = s.find('<', i)) != std::string::npos) {
    const std::size_t end = s.find('>', i);
    if (end == std::string::npos) return false;
    std::string tag = s.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.empty()) return false;
    if (tag.front() == '?') {
      if (tag.back() != '?') return false;
      continue;
    }
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
    if (tag.front() == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.back() == '/';
    const std::string name = tag.substr(0, tag.find_first_of(" /"));
    if (stack.empty()) ++roots;
    if (!self_closing) stack.push_back(name);
  }
  return stack.empty() && roots == 1 && s.find('&', 0) == s.find("&amp;", 0);
}

const std::string kRotation = "synth:rotation:theta=0.3,m=30";
const std::string kNilpotentJordan = "synth:jordan_block:size=10,lambda=0,m=10,x0=0;0;0;0;0;0;0;0;0;1";
const std::string kLinear =
    "synth:linear_spectrum:spectrum=0.95;0.9+0.3i;0.9-0.3i;0.8,similarity=orthogonal,seed=5,m=60";

}  // namespace

TEST_CASE("exit codes: success, data, numerical, usage") {
  TempDir dir;
  kschur::save_snapshots(dir / "zero.csv", kschur::RealMatrix::Zero(2, 6), kschur::SnapshotFormat::Csv);
  std::ofstream(dir / "bad.csv") << "1,2\n3\n";
  std::ofstream(dir / "w.txt") << "1 2 3\n";
  std::ofstream(dir / "cfg.json") << "{\"unknown\": 3}";

  struct Case {
    std::vector<std::string> args;
    int code;
  };
  const std::vector<Case> cases = {
      {{"analyze", "--input", kRotation, "--out", dir / "a"}, 0},
      {{"synth", "--input", kRotation, "--out", dir / "s"}, 0},
      {{"--help"}, 0},
      {{"analyze", "--help"}, 0},
      {{"forecast", "--input", dir / "missing.csv", "--out", dir / "f"}, 1},
      {{"analyze", "--input", dir / "bad.csv", "--out", dir / "b"}, 1},
      {{"stream", "--input", kRotation, "--window", "20", "--steps", "40", "--out", dir / "st"}, 1},
      {{"analyze", "--input", kRotation, "--method", "ks_ssmd", "--select", "1,2", "--weights", dir / "w.txt",
        "--out", dir / "w"},
       1},
      {{"analyze", "--input", kRotation, "--method", "ks_ssmd", "--select", "1", "--out", dir / "p"}, 1},
      {{"analyze", "--input", kRotation, "--method", "ks_ssmd", "--select", "9", "--out", dir / "p"}, 1},
      {{"analyze", "--input", "synth:rotation:theta=x", "--out", dir / "p"}, 1},
      {{"analyze", "--input", dir / "zero.csv", "--out", dir / "z"}, 2},
      {{"compare", "--input", dir / "zero.csv", "--method", "ks_ssmd", "--out", dir / "z2"}, 0},
      {{"analyze", "--input", kRotation, "--method", "ks_essmd", "--kernel", "gaussian", "--out", dir / "g"}, 64},
      {{"analyze", "--input", kRotation, "--method", "dmd", "--kernel", "gaussian", "--sigma", "1", "--out",
        dir / "g"},
       64},
      {{"analyze", "--input", kRotation, "--sigma", "1", "--out", dir / "g"}, 64},
      {{"compare", "--input", kRotation, "--method", "", "--out", dir / "c"}, 64},
      {{"compare", "--input", kRotation, "--method", "dmd,foo", "--out", dir / "c"}, 64},
      {{"compare", "--input", kRotation, "--method", "dmd,dmd", "--out", dir / "c"}, 64},
      {{"analyze", "--out", dir / "c"}, 64},
      {{"frobnicate"}, 64},
      {{}, 64},
      {{"analyze", "--input", kRotation, "--bogus"}, 64},
      {{"analyze", "--input", kRotation, "--window", "abc"}, 64},
      {{"stream", "--input", kRotation, "--select", "1"}, 64},
      {{"analyze", "--input", kRotation, "--plots"}, 64},
      {{"analyze", "--input", kRotation, "--weights", dir / "w.txt"}, 64},
      {{"analyze", "--input", kRotation, "--tol", "1.5"}, 64},
      {{"synth", "--input", dir / "zero.csv", "--out", dir / "s2"}, 64},
      {{"analyze", "--input", kRotation, "--config", dir / "cfg.json"}, 64},
      {{"analyze", "--input", kRotation, "--config", dir / "nocfg.json"}, 1},
  };
  for (const Case& c : cases) {
    std::string joined;
    for (const auto& a : c.args) joined += a + " ";
    CAPTURE(joined);
    const Run r = run(c.args);
    CHECK(r.code == c.code);
    if (c.code != 0) CHECK(!r.err.empty());
  }
}

TEST_CASE("exit codes: KS_NUM_THREADS is validated") {
  TempDir dir;
  setenv("KS_NUM_THREADS", "zero", 1);
  CHECK(run({"analyze", "--input", kRotation, "--out", dir / "a"}).code == 64);
  setenv("KS_NUM_THREADS", "2", 1);
  CHECK(run({"analyze", "--input", kRotation, "--out", dir / "a"}).code == 0);
  unsetenv("KS_NUM_THREADS");
}

TEST_CASE("analyze: smoke contract and rotation eigenvalues") {
  TempDir dir;
  kschur::SyntheticParams p;
  p.kind = kschur::SyntheticKind::Rotation;
  p.m_total = 30;
  kschur::save_snapshots(dir / "traj.csv", kschur::generate_synthetic(p).real(), kschur::SnapshotFormat::Csv);
  const Run r = run({"analyze", "--input", dir / "traj.csv", "--method", "ks_ssmd", "--kernel", "linear", "--out",
                     dir / "out", "--factors"});
  REQUIRE(r.code == 0);
  for (const char* f : {"eigenvalues.csv", "metrics.json", "effective_config.json", "reconstruction_errors.csv",
                        "consistency_residuals.csv", "T_ks_ssmd.csv", "zeta_x_ks_ssmd.csv"}) {
    CHECK(fs::exists(dir.path / "out" / f));
  }
  const auto rows = read_csv(dir.path / "out" / "eigenvalues.csv");
  REQUIRE(rows.size() == 3);
  std::vector<std::complex<double>> eig;
  for (std::size_t i = 1; i < rows.size(); ++i) eig.emplace_back(std::stod(rows[i][2]), std::stod(rows[i][3]));
  CHECK(distance_to(eig, std::polar(1.0, 0.3)) <= 1e-8);
  CHECK(distance_to(eig, std::polar(1.0, -0.3)) <= 1e-8);
  const auto metrics = kschur::load_metrics_json(dir.path / "out" / "metrics.json");
  REQUIRE(metrics.size() == 1);
  CHECK(metrics[0].per_method[0].max_reconstruction_error <= 1e-10);
  CHECK(read_csv(dir.path / "out" / "zeta_x_ks_ssmd.csv").size() == 30);
  CHECK(read_csv(dir.path / "out" / "T_ks_ssmd.csv").size() == 2);
}

TEST_CASE("analyze: subset reconstruction output") {
  TempDir dir;
  {
    std::ofstream w(dir / "w.txt");
    for (int i = 0; i < 30; ++i) w << (i < 10 ? i + 1 : 1) << '\n';
  }
  const Run r = run({"analyze", "--input", kRotation, "--method", "ks_ssmd,ks_essmd", "--select", "1,2", "--weights",
                     dir / "w.txt", "--out", dir / "out"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(dir.path / "out" / "subset.json"));
  REQUIRE(j.size() == 2);
  for (const auto& entry : j) {
    CHECK(entry["selected"] == nlohmann::json::array({1, 2}));
    for (const auto& c : entry["coefficients"]) {
      CHECK(std::abs(c[0].get<double>() - 1.0) <= 1e-10);
      CHECK(std::abs(c[1].get<double>()) <= 1e-10);
    }
    CHECK(entry["residual_fro"].get<double>() <= 1e-10);
  }
}

TEST_CASE("compare: rotation fixture agrees across methods") {
  TempDir dir;
  const Run r = run({"compare", "--input", kRotation, "--out", dir / "out"});
  REQUIRE(r.code == 0);
  CHECK(r.out == slurp(dir.path / "out" / "compare.txt"));
  const auto rows = read_csv(dir.path / "out" / "compare.csv");
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][1] == "ok");
    const auto eig = parse_pair_list(rows[i][7]);
    REQUIRE(eig.size() == 2);
    CHECK(distance_to(eig, std::polar(1.0, 0.3)) <= 1e-8);
    CHECK(distance_to(eig, std::polar(1.0, -0.3)) <= 1e-8);
    CHECK(std::abs(std::stod(rows[i][6]) - 1.0) <= 1e-8);
  }
}

TEST_CASE("compare: Jordan block fixture") {
  TempDir dir;
  const Run r = run({"compare", "--input", kNilpotentJordan, "--out", dir / "out"});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(dir.path / "out" / "compare.csv");
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CAPTURE(rows[i][0]);
    REQUIRE(rows[i][1] == "ok");
    CHECK(rows[i][2] == "10");
    const double kappa = std::stod(rows[i][6]);
    if (rows[i][0] == "dmd" || rows[i][0] == "edmd") {
      CHECK(kappa >= 1e12);
    } else {
      CHECK(std::abs(kappa - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("forecast: linear fixture, empty horizon") {
  TempDir dir;
  const Run r = run({"forecast", "--input", kLinear, "--window", "20", "--horizon", "10", "--out", dir / "out"});
  REQUIRE(r.code == 0);
  const auto errs = read_csv(dir.path / "out" / "forecast_errors.csv");
  REQUIRE(errs.size() == 1 + 4 * 10);
  double worst = 0.0;
  for (std::size_t i = 1; i < errs.size(); ++i) worst = std::max(worst, std::stod(errs[i][2]));
  CHECK(worst <= 1e-6);
  const auto pred = read_csv(dir.path / "out" / "predictions.csv");
  CHECK(pred.size() == 1 + 4 * 10);
  CHECK(pred[0].size() == 2 + 4);

  const Run z = run({"forecast", "--input", kLinear, "--window", "20", "--horizon", "0", "--out", dir / "zero"});
  REQUIRE(z.code == 0);
  CHECK(read_csv(dir.path / "zero" / "predictions.csv").size() == 1);
  CHECK(read_csv(dir.path / "zero" / "forecast_errors.csv").size() == 1);
}

TEST_CASE("stream: defaults, outputs and determinism") {
  TempDir dir;
  const std::vector<std::string> base = {"stream", "--input", "synth:stuart_landau_like:m=240,seed=3,noise=1e-6",
                                         "--method", "ks_ssmd,dmd", "--steps", "20", "--plots"};
  auto a = base;
  a.insert(a.end(), {"--out", dir / "a"});
  auto b = base;
  b.insert(b.end(), {"--out", dir / "b"});
  REQUIRE(run(a).code == 0);
  setenv("KS_NUM_THREADS", "3", 1);
  REQUIRE(run(b).code == 0);
  unsetenv("KS_NUM_THREADS");
  const auto cfg = nlohmann::json::parse(slurp(dir.path / "a" / "effective_config.json"));
  CHECK(cfg["window"] == 100);
  CHECK(cfg["horizon"] == 40);
  CHECK(cfg["steps"] == 20);
  for (const char* f : {"metrics.json", "metrics.csv", "eigenvalues.svg", "errors.svg", "effective_config.json"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(dir.path / "a" / f));
    CHECK(slurp(dir.path / "a" / f) == slurp(dir.path / "b" / f));
  }
  for (const char* f : {"eigenvalues.svg", "errors.svg"}) {
    const std::string svg = slurp(dir.path / "a" / f);
    CHECK(well_formed_xml(svg));
    CHECK(svg.find("<svg") != std::string::npos);
  }
  CHECK(slurp(dir.path / "a" / "errors.svg").find("machine precision") != std::string::npos);
  CHECK(read_csv(dir.path / "a" / "metrics.csv").size() == 1 + 20 * 2);
}

TEST_CASE("config file precedence: flags over file over defaults") {
  TempDir dir;
  std::ofstream(dir / "cfg.json") << R"({"window": 30, "horizon": 7, "methods": ["ks_ssmd"], "steps": 3})";
  const Run r = run({"stream", "--input", kRotation, "--config", dir / "cfg.json", "--window", "25", "--out",
                     dir / "out"});
  REQUIRE(r.code == 0);
  const auto cfg = nlohmann::json::parse(slurp(dir.path / "out" / "effective_config.json"));
  CHECK(cfg["window"] == 25);
  CHECK(cfg["horizon"] == 7);
  CHECK(cfg["steps"] == 3);
  CHECK(cfg["methods"] == nlohmann::json::array({"ks_ssmd"}));
  CHECK(cfg["kernel"] == "linear");
  const auto metrics = kschur::load_metrics_json(dir.path / "out" / "metrics.json");
  REQUIRE(metrics.size() == 3);
  CHECK(metrics[0].per_method.size() == 1);
  CHECK(metrics[0].per_method[0].forecast_errors.size() == 7);
}

TEST_CASE("synth: raw output round trips and analysis is repeatable") {
  TempDir dir;
  REQUIRE(run({"synth", "--input", kLinear, "--format", "raw", "--out", dir / "s"}).code == 0);
  const auto z = kschur::load_snapshots(dir.path / "s" / "trajectory.raw", kschur::SnapshotFormat::RawF64);
  kschur::SyntheticParams p = kschur::parse_synthetic_spec(kLinear);
  CHECK(z == kschur::generate_synthetic(p).real());
  const std::string raw = (dir.path / "s" / "trajectory.raw").string();
  REQUIRE(run({"analyze", "--input", raw, "--out", dir / "a1"}).code == 0);
  REQUIRE(run({"analyze", "--input", raw, "--out", dir / "a2"}).code == 0);
  for (const auto& e : fs::directory_iterator(dir.path / "a1")) {
    CHECK(slurp(e.path()) == slurp(dir.path / "a2" / e.path().filename()));
  }
}
