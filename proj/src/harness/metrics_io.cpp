#include <cmath>
#include <fstream>

#include <json.hpp>

#include "kschur/harness.hpp"

namespace kschur {

namespace {

using Json = nlohmann::ordered_json;

// JSON has no literal for non-finite doubles; they travel as strings.
Json encode(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  return v;
}

double decode(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    if (s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
    fail(ErrorCode::ParseError, "unexpected string '" + s + "' where a number was expected");
  }
  return j.get<double>();
}

Json encode_optional(const std::optional<double>& v) { return v ? encode(*v) : Json(nullptr); }

std::optional<double> decode_optional(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return decode(j);
}

Json to_json(const MethodMetrics& mm) {
  Json j;
  j["method"] = to_string(mm.method);
  j["status"] = mm.ok ? "ok" : "failed";
  if (!mm.ok) {
    j["error"] = mm.error_code;
    j["message"] = mm.message;
    return j;
  }
  j["rank"] = mm.rank;
  Json eig = Json::array();
  for (const Complex& z : mm.eigenvalues) eig.push_back(Json::array({encode(z.real()), encode(z.imag())}));
  j["eigenvalues"] = std::move(eig);
  j["max_reconstruction_error"] = encode(mm.max_reconstruction_error);
  j["max_consistency_residual"] = encode_optional(mm.max_consistency_residual);
  j["relative_consistency_residual"] = encode_optional(mm.relative_consistency_residual);
  Json fe = Json::array();
  for (const auto& e : mm.forecast_errors) fe.push_back(encode_optional(e));
  j["forecast_errors"] = std::move(fe);
  j["kappa_psi_x"] = encode(mm.condition.kappa_psi_x);
  j["kappa_eigvec"] = encode(mm.condition.kappa_eigvec);
  return j;
}

MethodMetrics from_json(const Json& j) {
  MethodMetrics mm;
  mm.method = parse_method(j.at("method").get<std::string>());
  mm.ok = j.at("status").get<std::string>() == "ok";
  if (!mm.ok) {
    mm.error_code = j.at("error").get<std::string>();
    mm.message = j.at("message").get<std::string>();
    return mm;
  }
  mm.rank = j.at("rank").get<Index>();
  for (const auto& z : j.at("eigenvalues")) mm.eigenvalues.emplace_back(decode(z.at(0)), decode(z.at(1)));
  mm.max_reconstruction_error = decode(j.at("max_reconstruction_error"));
  mm.max_consistency_residual = decode_optional(j.at("max_consistency_residual"));
  mm.relative_consistency_residual = decode_optional(j.at("relative_consistency_residual"));
  for (const auto& e : j.at("forecast_errors")) mm.forecast_errors.push_back(decode_optional(e));
  mm.condition.kappa_psi_x = decode(j.at("kappa_psi_x"));
  mm.condition.kappa_eigvec = decode(j.at("kappa_eigvec"));
  return mm;
}

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string eigenvalue_list(const std::vector<Complex>& values) {
  std::string s = "\"";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) s += ';';
    s += "(" + format_double(values[i].real()) + "," + format_double(values[i].imag()) + ")";
  }
  return s + "\"";
}

std::string forecast_list(const std::vector<std::optional<double>>& values) {
  std::string s = "\"";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) s += ';';
    s += values[i] ? format_double(*values[i]) : "NA";
  }
  return s + "\"";
}

}  // namespace

void save_metrics(const std::vector<WindowMetrics>& metrics, const std::filesystem::path& path,
                  MetricsFormat format) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  if (format == MetricsFormat::Json) {
    Json doc = Json::array();
    for (const auto& wm : metrics) {
      Json j;
      j["step"] = wm.step;
      Json methods = Json::array();
      for (const auto& mm : wm.per_method) methods.push_back(to_json(mm));
      j["methods"] = std::move(methods);
      doc.push_back(std::move(j));
    }
    out << doc.dump(2) << '\n';
  } else {
    out << "step,method,status,rank,max_reconstruction_error,max_consistency_residual,"
           "relative_consistency_residual,max_forecast_error,kappa_psi_x,kappa_eigvec,eigenvalues,"
           "forecast_errors\n";
    for (const auto& wm : metrics) {
      for (const auto& mm : wm.per_method) {
        out << wm.step << ',' << to_string(mm.method) << ',' << (mm.ok ? "ok" : mm.error_code) << ',';
        if (!mm.ok) {
          out << ",,,,,,,\"\",\"\"\n";
          continue;
        }
        std::optional<double> worst;
        for (const auto& e : mm.forecast_errors) {
          if (e && (!worst || *e > *worst || std::isnan(*e))) worst = e;
        }
        out << mm.rank << ',' << format_double(mm.max_reconstruction_error) << ','
            << optional_text(mm.max_consistency_residual) << ',' << optional_text(mm.relative_consistency_residual)
            << ',' << optional_text(worst) << ',' << format_double(mm.condition.kappa_psi_x) << ','
            << format_double(mm.condition.kappa_eigvec) << ',' << eigenvalue_list(mm.eigenvalues) << ','
            << forecast_list(mm.forecast_errors) << '\n';
      }
    }
  }
  if (!out) fail(ErrorCode::IoError, "write failure on " + path.string());
}

std::vector<WindowMetrics> load_metrics_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  std::vector<WindowMetrics> out;
  try {
    for (const auto& j : doc) {
      WindowMetrics wm;
      wm.step = j.at("step").get<Index>();
      for (const auto& mj : j.at("methods")) wm.per_method.push_back(from_json(mj));
      out.push_back(std::move(wm));
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return out;
}

}  // namespace kschur
