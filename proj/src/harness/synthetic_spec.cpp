#include <charconv>
#include <string>

#include "kschur/harness.hpp"

namespace kschur {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view text, std::string_view key) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    fail(ErrorCode::ParseError, "bad number '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

Index parse_count(std::string_view text, std::string_view key) {
  text = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    fail(ErrorCode::ParseError, "bad integer '" + std::string(text) + "' for " + std::string(key));
  }
  return static_cast<Index>(value);
}

// Accepts "a", "bi", "a+bi", "a-bi" (also with 'j').
Complex parse_complex(std::string_view text, std::string_view key) {
  text = trim(text);
  if (text.empty()) fail(ErrorCode::ParseError, "empty complex value for " + std::string(key));
  const char last = text.back();
  if (last != 'i' && last != 'j') return {parse_real(text, key), 0.0};
  std::string_view body = text.substr(0, text.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const auto imag_of = [&](std::string_view s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    if (s.front() == '+') s.remove_prefix(1);
    return parse_real(s, key);
  };
  if (split == std::string_view::npos) return {0.0, imag_of(body)};
  return {parse_real(body.substr(0, split), key), imag_of(body.substr(split))};
}

std::vector<Complex> parse_complex_list(std::string_view text, std::string_view key) {
  std::vector<Complex> out;
  while (true) {
    const std::size_t semi = text.find(';');
    out.push_back(parse_complex(text.substr(0, semi), key));
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
  }
  return out;
}

SyntheticKind parse_kind(std::string_view name) {
  if (name == "linear_spectrum") return SyntheticKind::LinearSpectrum;
  if (name == "jordan_block") return SyntheticKind::JordanBlock;
  if (name == "rotation") return SyntheticKind::Rotation;
  if (name == "stuart_landau_like" || name == "stuart_landau") return SyntheticKind::StuartLandau;
  fail(ErrorCode::BadParams, "unknown synthetic kind '" + std::string(name) + "'");
}

}  // namespace

bool is_synthetic_spec(std::string_view text) { return text.rfind("synth:", 0) == 0; }

SyntheticParams parse_synthetic_spec(std::string_view text) {
  if (!is_synthetic_spec(text)) fail(ErrorCode::ParseError, "synthetic spec must start with 'synth:'");
  text.remove_prefix(6);
  const std::size_t colon = text.find(':');
  SyntheticParams p;
  p.kind = parse_kind(trim(text.substr(0, colon)));
  if (p.kind == SyntheticKind::JordanBlock) p.m_total = 20;
  if (colon == std::string_view::npos) return p;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::ParseError, "expected key=value, got '" + std::string(item) + "'");
    const std::string_view key = trim(item.substr(0, eq));
    const std::string_view value = trim(item.substr(eq + 1));
    if (key == "m") {
      p.m_total = parse_count(value, key);
    } else if (key == "seed") {
      p.seed = static_cast<std::uint64_t>(parse_count(value, key));
    } else if (key == "noise") {
      p.noise = parse_real(value, key);
    } else if (key == "x0") {
      const auto v = parse_complex_list(value, key);
      p.initial = Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
    } else if (key == "spectrum") {
      p.spectrum = parse_complex_list(value, key);
    } else if (key == "similarity") {
      if (value == "identity") p.similarity = Similarity::Identity;
      else if (value == "orthogonal") p.similarity = Similarity::Orthogonal;
      else if (value == "general") p.similarity = Similarity::General;
      else fail(ErrorCode::BadParams, "unknown similarity '" + std::string(value) + "'");
    } else if (key == "size") {
      p.size = parse_count(value, key);
    } else if (key == "lambda") {
      p.eigenvalue = parse_complex(value, key);
    } else if (key == "theta") {
      p.angle = parse_real(value, key);
    } else if (key == "radius") {
      p.radius = parse_real(value, key);
    } else if (key == "omega") {
      p.omega = parse_real(value, key);
    } else if (key == "rate") {
      p.rate = parse_real(value, key);
    } else if (key == "dt") {
      p.dt = parse_real(value, key);
    } else if (key == "substeps") {
      p.substeps = parse_count(value, key);
    } else {
      fail(ErrorCode::BadParams, "unknown synthetic parameter '" + std::string(key) + "'");
    }
  }
  return p;
}

}  // namespace kschur
