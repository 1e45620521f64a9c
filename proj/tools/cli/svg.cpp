#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace kschur::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* colour(Method m) {
  switch (m) {
    case Method::Dmd: return "#1f77b4";
    case Method::Edmd: return "#ff7f0e";
    case Method::KsSsmd: return "#2ca02c";
    case Method::KsEssmd: return "#d62728";
  }
  return "#000000";
}

std::vector<Method> methods_in(const std::vector<WindowMetrics>& metrics) {
  std::vector<Method> out;
  for (const auto& wm : metrics) {
    for (const auto& mm : wm.per_method) {
      if (std::find(out.begin(), out.end(), mm.method) == out.end()) out.push_back(mm.method);
    }
  }
  return out;
}

std::string header(const std::string& title) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n"
         "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n"
         "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" + escape(title) + "</text>\n";
}

std::string legend_entry(int row, const std::string& label, const std::string& stroke, bool dashed) {
  const double y = kTop + 16.0 + 18.0 * row;
  const double x = kWidth - kRight + 12.0;
  return "<line x1=\"" + num(x) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x + 20) + "\" y2=\"" + num(y) +
         "\" stroke=\"" + stroke + "\" stroke-width=\"2\"" + (dashed ? " stroke-dasharray=\"5,3\"" : "") + "/>\n" +
         "<text x=\"" + num(x + 26) + "\" y=\"" + num(y + 4) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
         escape(label) + "</text>\n";
}

std::string frame(const std::string& xlabel, const std::string& ylabel) {
  const double w = kWidth - kLeft - kRight, h = kHeight - kTop - kBottom;
  return "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" fill=\"none\" stroke=\"black\"/>\n"
         "<text x=\"" + num(kLeft + w / 2) + "\" y=\"" + num(kHeight - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(xlabel) + "</text>\n"
         "<text x=\"16\" y=\"" + num(kTop + h / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 " + num(kTop + h / 2) + ")\">" + escape(ylabel) + "</text>\n";
}

}  // namespace

std::string eigenvalue_scatter_svg(const std::vector<WindowMetrics>& metrics) {
  double extent = 1.0;
  for (const auto& wm : metrics) {
    for (const auto& mm : wm.per_method) {
      for (const Complex& z : mm.eigenvalues) {
        if (std::isfinite(z.real()) && std::isfinite(z.imag())) {
          extent = std::max({extent, std::abs(z.real()), std::abs(z.imag())});
        }
      }
    }
  }
  extent *= 1.1;
  // Square plot area so the unit circle stays round.
  const double side = std::min(kWidth - kLeft - kRight, kHeight - kTop - kBottom);
  const double cx = kLeft + side / 2, cy = kTop + side / 2, scale = side / (2 * extent);
  std::string s = header("Eigenvalues, all windows");
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(side) + "\" height=\"" + num(side) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(cy) + "\" x2=\"" + num(kLeft + side) + "\" y2=\"" + num(cy) +
       "\" stroke=\"#bbbbbb\"/>\n";
  s += "<line x1=\"" + num(cx) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(cx) + "\" y2=\"" + num(kTop + side) +
       "\" stroke=\"#bbbbbb\"/>\n";
  s += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(scale) +
       "\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"4,3\"/>\n";
  s += "<text x=\"" + num(kLeft + side) + "\" y=\"" + num(kTop + side + 16) +
       "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">half-width " + num(extent) + "</text>\n";
  const auto methods = methods_in(metrics);
  for (Method m : methods) {
    s += "<g fill=\"" + std::string(colour(m)) + "\" fill-opacity=\"0.6\">\n";
    for (const auto& wm : metrics) {
      for (const auto& mm : wm.per_method) {
        if (mm.method != m) continue;
        for (const Complex& z : mm.eigenvalues) {
          if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
          s += "<circle cx=\"" + num(cx + scale * z.real()) + "\" cy=\"" + num(cy - scale * z.imag()) +
               "\" r=\"2.5\"/>\n";
        }
      }
    }
    s += "</g>\n";
  }
  int row = 0;
  for (Method m : methods) s += legend_entry(row++, to_string(m), colour(m), false);
  s += legend_entry(row, "unit circle", "#888888", true);
  s += "</svg>\n";
  return s;
}

std::string error_curves_svg(const std::vector<WindowMetrics>& metrics, double floor_level) {
  struct Series {
    std::string label;
    std::string stroke;
    bool dashed;
    std::vector<std::pair<double, double>> points;  // step, log10 value
  };
  std::vector<Series> series;
  for (Method m : methods_in(metrics)) {
    Series rec{to_string(m) + " reconstruction", colour(m), false, {}};
    Series con{to_string(m) + " consistency", colour(m), true, {}};
    for (const auto& wm : metrics) {
      for (const auto& mm : wm.per_method) {
        if (mm.method != m || !mm.ok) continue;
        const auto add = [&](Series& se, double v) {
          if (std::isfinite(v) && v > 0.0) se.points.emplace_back(static_cast<double>(wm.step), std::log10(v));
        };
        add(rec, mm.max_reconstruction_error);
        if (mm.relative_consistency_residual) add(con, *mm.relative_consistency_residual);
      }
    }
    series.push_back(std::move(rec));
    if (is_schur_method(m)) series.push_back(std::move(con));
  }
  double lo = std::log10(floor_level), hi = lo;
  double first = 1.0, last = 1.0;
  for (const auto& wm : metrics) last = std::max(last, static_cast<double>(wm.step));
  for (const auto& se : series) {
    for (const auto& [x, y] : se.points) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  }
  lo = std::floor(lo) - 1.0;
  hi = std::ceil(hi) + 1.0;
  if (last == first) last = first + 1.0;
  const double w = kWidth - kLeft - kRight, h = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + w * (x - first) / (last - first); };
  const auto py = [&](double y) { return kTop + h * (hi - y) / (hi - lo); };

  std::string s = header("Errors per window");
  s += frame("step", "log10 error");
  const int stride = std::max(1, static_cast<int>(std::ceil((hi - lo) / 10.0)));
  for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); e += stride) {
    s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py(e)) + "\" x2=\"" + num(kLeft + w) + "\" y2=\"" +
         num(py(e)) + "\" stroke=\"#eeeeee\"/>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(e) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">1e" + std::to_string(e) + "</text>\n";
  }
  s += "<text x=\"" + num(kLeft) + "\" y=\"" + num(kTop + h + 14) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + num(first) + "</text>\n";
  s += "<text x=\"" + num(kLeft + w) + "\" y=\"" + num(kTop + h + 14) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + num(last) + "</text>\n";
  const double fy = py(std::log10(floor_level));
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(fy) + "\" x2=\"" + num(kLeft + w) + "\" y2=\"" + num(fy) +
       "\" stroke=\"#e6b800\" stroke-width=\"2\"/>\n";
  int row = 0;
  for (const auto& se : series) {
    if (!se.points.empty()) {
      s += "<polyline fill=\"none\" stroke=\"" + se.stroke + "\" stroke-width=\"1.5\"" +
           (se.dashed ? " stroke-dasharray=\"5,3\"" : "") + " points=\"";
      for (std::size_t i = 0; i < se.points.size(); ++i) {
        if (i) s += ' ';
        s += num(px(se.points[i].first)) + "," + num(py(se.points[i].second));
      }
      s += "\"/>\n";
    }
    s += legend_entry(row++, se.label, se.stroke, se.dashed);
  }
  s += legend_entry(row, "machine precision", "#e6b800", false);
  s += "</svg>\n";
  return s;
}

}  // namespace kschur::cli
