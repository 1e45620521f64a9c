#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "options.hpp"
#include "svg.hpp"

namespace kschur::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::IoError, "write failure on " + path.string());
}

fs::path prepare_out(const CliOptions& o) {
  const fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) fail(ErrorCode::IoError, "cannot create output directory " + o.out);
  write_file(dir / "effective_config.json", effective_config_json(o));
  return dir;
}

std::string complex_text(const Complex& z) {
  if (z.imag() == 0.0) return format_double(z.real());
  const std::string im = format_double(std::abs(z.imag()));
  return format_double(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + im + "i";
}

std::string matrix_csv(const Matrix& m) {
  std::string s;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) s += ',';
      s += complex_text(m(i, j));
    }
    s += '\n';
  }
  return s;
}

Json encode(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  return v;
}

std::string short_num(double v) {
  std::ostringstream ss;
  ss << std::setprecision(3) << std::scientific << v;
  return ss.str();
}

std::string opt_short(const std::optional<double>& v) { return v ? short_num(*v) : "-"; }

Matrix load_input(const CliOptions& o) {
  if (is_synthetic_spec(o.input)) {
    SyntheticParams p = parse_synthetic_spec(o.input);
    if (o.seed && o.input.find("seed=") == std::string::npos) p.seed = *o.seed;
    return generate_synthetic(p);
  }
  return load_snapshots(o.input, resolve_format(o)).cast<Complex>();
}

RealVector load_weights(const std::string& path, Index m) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open weights file " + path);
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    std::replace(token.begin(), token.end(), ',', ' ');
    std::istringstream parts(token);
    std::string part;
    while (parts >> part) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(part, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != part.size()) fail(ErrorCode::ParseError, "bad weight '" + part + "' in " + path);
      values.push_back(v);
    }
  }
  if (static_cast<Index>(values.size()) != m) {
    fail(ErrorCode::DimensionMismatch, "weights file has " + std::to_string(values.size()) + " entries for " +
                                           std::to_string(m) + " snapshots");
  }
  return Eigen::Map<const RealVector>(values.data(), m);
}

std::string eigenvalue_rows(Method m, const std::vector<Complex>& eig) {
  std::string s;
  for (std::size_t i = 0; i < eig.size(); ++i) {
    s += to_string(m) + ',' + std::to_string(i + 1) + ',' + format_double(eig[i].real()) + ',' +
         format_double(eig[i].imag()) + ',' + format_double(std::abs(eig[i])) + '\n';
  }
  return s;
}

int cmd_analyze(const CliOptions& o, std::ostream& out) {
  const Matrix z = load_input(o);
  const SnapshotPairs data = SnapshotPairs::from_trajectory(z);
  validate(data);
  const ExperimentConfig config = experiment_config(o);
  const RealVector omega = o.weights.empty() ? RealVector::Ones(data.count()) : load_weights(o.weights, data.count());
  const fs::path dir = prepare_out(o);

  std::string eig_csv = "method,index,real,imag,modulus\n";
  std::string rec_csv = "method,snapshot,relative_error\n";
  std::string con_csv = "method,pair,residual\n";
  Json subset = Json::array();
  WindowMetrics wm;
  for (Method m : o.methods) {
    const MethodFit fit = fit_method(data, m, config, Matrix(z.rows(), 0), 0);
    wm.per_method.push_back(fit.metrics);
    eig_csv += eigenvalue_rows(m, fit.metrics.eigenvalues);
    const SnapshotReconstruction rec =
        fit.ks ? reconstruct_snapshots(*fit.ks, data.x) : reconstruct_snapshots(*fit.diag, data.x);
    for (Index i = 0; i < rec.errors.size(); ++i) {
      rec_csv += to_string(m) + ',' + std::to_string(i + 1) + ',' + format_double(rec.errors(i)) + '\n';
    }
    if (fit.ks) {
      const RealVector res = consistency_residuals(*fit.ks);
      for (Index j = 0; j < res.size(); ++j) {
        con_csv += to_string(m) + ',' + std::to_string(j + 2) + ',' + format_double(res(j)) + '\n';
      }
      if (o.factors) {
        write_file(dir / ("T_" + to_string(m) + ".csv"), matrix_csv(fit.ks->schur.t()));
        write_file(dir / ("zeta_x_" + to_string(m) + ".csv"), matrix_csv(fit.ks->zeta_x));
      }
      if (!o.select.empty()) {
        std::vector<Index> chosen;
        for (Index i : o.select) {
          if (i > fit.ks->rank()) {
            fail(ErrorCode::IndexOutOfRange, "--select index " + std::to_string(i) + " exceeds rank " +
                                                 std::to_string(fit.ks->rank()) + " of " + to_string(m));
          }
          chosen.push_back(i - 1);
        }
        const ModalReconstruction r = subset_reconstruction(*fit.ks, data.x, chosen, omega);
        Json j;
        j["method"] = to_string(m);
        Json sel = Json::array();
        for (Index i : r.selected_indices) sel.push_back(i + 1);
        j["selected"] = std::move(sel);
        Json coef = Json::array();
        for (Index i = 0; i < r.coefficients.size(); ++i) {
          coef.push_back(Json::array({encode(r.coefficients(i).real()), encode(r.coefficients(i).imag())}));
        }
        j["coefficients"] = std::move(coef);
        j["residual_fro"] = encode(r.residual_fro);
        subset.push_back(std::move(j));
      }
    }
    out << to_string(m) << ": rank " << fit.metrics.rank << ", max reconstruction error "
        << short_num(fit.metrics.max_reconstruction_error) << ", max consistency residual "
        << opt_short(fit.metrics.max_consistency_residual) << '\n';
  }
  write_file(dir / "eigenvalues.csv", eig_csv);
  write_file(dir / "reconstruction_errors.csv", rec_csv);
  write_file(dir / "consistency_residuals.csv", con_csv);
  if (!o.select.empty()) write_file(dir / "subset.json", subset.dump(2) + "\n");
  save_metrics({wm}, dir / "metrics.json", MetricsFormat::Json);
  return kExitOk;
}

int cmd_stream(const CliOptions& o, std::ostream& out) {
  const Matrix z = load_input(o);
  const auto metrics = run_sliding_windows(z, experiment_config(o));
  const fs::path dir = prepare_out(o);
  save_metrics(metrics, dir / "metrics.json", MetricsFormat::Json);
  save_metrics(metrics, dir / "metrics.csv", MetricsFormat::Csv);
  if (o.plots) {
    write_file(dir / "eigenvalues.svg", eigenvalue_scatter_svg(metrics));
    write_file(dir / "errors.svg", error_curves_svg(metrics, kEps));
  }
  std::size_t failures = 0;
  for (const auto& wm : metrics) {
    for (const auto& mm : wm.per_method) failures += mm.ok ? 0 : 1;
  }
  out << "stream: " << metrics.size() << " windows, " << o.methods.size() << " methods, " << failures
      << " failed fits\n";
  return kExitOk;
}

int cmd_forecast(const CliOptions& o, std::ostream& out) {
  const Matrix z = load_input(o);
  const Index w = o.window;
  if (z.cols() < w + 1) {
    fail(ErrorCode::InsufficientData, "forecast with window " + std::to_string(w) + " needs " +
                                          std::to_string(w + 1) + " snapshots, got " + std::to_string(z.cols()));
  }
  const SnapshotPairs data{z.leftCols(w), z.middleCols(1, w), 1.0};
  const Index available = std::min<Index>(o.horizon, z.cols() - w);
  const Matrix truth = z.middleCols(w, available);
  const ExperimentConfig config = experiment_config(o);
  const fs::path dir = prepare_out(o);
  const bool complex_data = !has_zero_imaginary_part(z);

  std::string pred = "method,lead";
  for (Index i = 0; i < z.rows(); ++i) pred += ",x" + std::to_string(i + 1);
  pred += '\n';
  std::string errs = "method,lead,relative_error\n";
  for (Method m : o.methods) {
    const MethodFit fit = fit_method(data, m, config, truth, o.horizon);
    const Vector origin = data.x.col(w - 1);
    const Matrix p = fit.ks ? forecast(*fit.ks, origin, o.horizon) : forecast(*fit.diag, origin, o.horizon);
    for (Index k = 0; k < p.cols(); ++k) {
      pred += to_string(m) + ',' + std::to_string(k + 1);
      for (Index i = 0; i < p.rows(); ++i) {
        pred += ',' + (complex_data ? complex_text(p(i, k)) : format_double(p(i, k).real()));
      }
      pred += '\n';
    }
    std::optional<double> worst;
    const auto& fe = fit.metrics.forecast_errors;
    for (std::size_t k = 0; k < fe.size(); ++k) {
      if (!fe[k]) continue;
      errs += to_string(m) + ',' + std::to_string(k + 1) + ',' + format_double(*fe[k]) + '\n';
      worst = worst ? std::max(*worst, *fe[k]) : *fe[k];
    }
    out << to_string(m) << ": " << p.cols() << " predicted steps, max relative error "
        << (worst ? short_num(*worst) : std::string("n/a (no ground truth)")) << '\n';
  }
  write_file(dir / "predictions.csv", pred);
  write_file(dir / "forecast_errors.csv", errs);
  return kExitOk;
}

std::string eigen_list(const std::vector<Complex>& eig) {
  std::string s;
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (i) s += ';';
    s += '(' + format_double(eig[i].real()) + ',' + format_double(eig[i].imag()) + ')';
  }
  return s;
}

int cmd_compare(const CliOptions& o, std::ostream& out) {
  const Matrix z = load_input(o);
  const SnapshotPairs data = SnapshotPairs::from_trajectory(z);
  validate(data);
  const ExperimentConfig config = experiment_config(o);
  const fs::path dir = prepare_out(o);
  std::vector<MethodMetrics> rows;
  for (Method m : o.methods) rows.push_back(evaluate_method(data, m, config, Matrix(z.rows(), 0), 0));

  std::string csv =
      "method,status,rank,max_reconstruction_error,max_consistency_residual,kappa_psi_x,kappa_eigvec,eigenvalues\n";
  for (const auto& mm : rows) {
    csv += to_string(mm.method) + ',' + (mm.ok ? "ok" : mm.error_code) + ',';
    if (mm.ok) {
      csv += std::to_string(mm.rank) + ',' + format_double(mm.max_reconstruction_error) + ',' +
             (mm.max_consistency_residual ? format_double(*mm.max_consistency_residual) : "") + ',' +
             format_double(mm.condition.kappa_psi_x) + ',' + format_double(mm.condition.kappa_eigvec) + ",\"" +
             eigen_list(mm.eigenvalues) + "\"";
    } else {
      csv += ",,,,,\"\"";
    }
    csv += '\n';
  }
  write_file(dir / "compare.csv", csv);

  std::ostringstream t;
  t << std::left << std::setw(10) << "method" << std::setw(20) << "status" << std::right << std::setw(6) << "rank"
    << std::setw(12) << "max_recon" << std::setw(12) << "max_consist" << std::setw(12) << "kappa_psi"
    << std::setw(12) << "kappa_basis" << "  eigenvalues\n";
  for (const auto& mm : rows) {
    t << std::left << std::setw(10) << to_string(mm.method) << std::setw(20) << (mm.ok ? "ok" : mm.error_code);
    if (mm.ok) {
      t << std::right << std::setw(6) << mm.rank << std::setw(12) << short_num(mm.max_reconstruction_error)
        << std::setw(12) << opt_short(mm.max_consistency_residual) << std::setw(12)
        << short_num(mm.condition.kappa_psi_x) << std::setw(12) << short_num(mm.condition.kappa_eigvec) << "  ";
      for (std::size_t i = 0; i < mm.eigenvalues.size(); ++i) {
        if (i) t << ' ';
        t << complex_text(mm.eigenvalues[i]);
      }
    } else {
      t << "  " << mm.message;
    }
    t << '\n';
  }
  write_file(dir / "compare.txt", t.str());
  out << t.str();
  return kExitOk;
}

int cmd_synth(const CliOptions& o, std::ostream& out) {
  const Matrix z = load_input(o);
  if (!has_zero_imaginary_part(z)) fail(ErrorCode::BadParams, "synthetic trajectory is complex; files hold real data");
  const fs::path dir = prepare_out(o);
  const SnapshotFormat format = o.format.value_or(SnapshotFormat::Csv);
  const fs::path file = dir / (format == SnapshotFormat::Csv ? "trajectory.csv" : "trajectory.raw");
  save_snapshots(file, z.real(), format);
  out << "synth: wrote " << z.rows() << " x " << z.cols() << " trajectory to " << file.string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (!args.empty() && (args[0] == "-h" || args[0] == "--help" || args[0] == "help")) {
    out << usage_text();
    return kExitOk;
  }
  try {
    const CliOptions o = parse_options(args);
    validate_usage(o);
    switch (o.command) {
      case Command::Analyze: return cmd_analyze(o, out);
      case Command::Stream: return cmd_stream(o, out);
      case Command::Forecast: return cmd_forecast(o, out);
      case Command::Compare: return cmd_compare(o, out);
      case Command::Synth: return cmd_synth(o, out);
    }
    return kExitUsage;
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "kschur: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "kschur: " << e.what() << '\n';
    return e.category() == ErrorCategory::Data ? kExitData : kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "kschur: IoError: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "kschur: internal error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace kschur::cli
