#include <cmath>
#include <string>

#include "kschur/linalg.hpp"

namespace kschur {

void require_finite(const Matrix& a, std::string_view what) {
  if (!a.allFinite()) fail(ErrorCode::NonFinite, std::string(what) + " has non-finite entries");
}

void require_finite(const RealMatrix& a, std::string_view what) {
  if (!a.allFinite()) fail(ErrorCode::NonFinite, std::string(what) + " has non-finite entries");
}

bool has_zero_imaginary_part(const Matrix& a) { return (a.imag().array() == 0.0).all(); }

double condition_number(const Matrix& a) {
  if (a.size() == 0) return 1.0;
  if (!a.allFinite()) return std::numeric_limits<double>::infinity();
  if ((a.array() == Complex(0.0)).all()) return std::numeric_limits<double>::infinity();
  const EconomySvd svd = economy_svd(a);
  const Index full = std::min(a.rows(), a.cols());
  const double smax = svd.sigma(0);
  const double smin = svd.sigma(svd.sigma.size() - 1);
  if (svd.sigma.size() < full || smin <= static_cast<double>(a.cols()) * kEps * smax) {
    return std::numeric_limits<double>::infinity();
  }
  return smax / smin;
}

double default_truncation_tol(Index m) { return static_cast<double>(m) * kEps; }

// Gram eigenvalues carry absolute errors near m * eps * lambda_1, so the
// matching cut on sigma = sqrt(lambda) sits at sqrt(m * eps).
double default_gram_truncation_tol(Index m) { return std::sqrt(static_cast<double>(m) * kEps); }

Index SchurForm::size() const {
  return kind == SchurKind::Real ? real_t.rows() : complex_t.rows();
}

Matrix SchurForm::q() const {
  return kind == SchurKind::Real ? Matrix(real_q.cast<Complex>()) : complex_q;
}

Matrix SchurForm::t() const {
  return kind == SchurKind::Real ? Matrix(real_t.cast<Complex>()) : complex_t;
}

std::vector<DiagonalBlock> SchurForm::blocks() const {
  std::vector<DiagonalBlock> out;
  const Index n = size();
  for (Index i = 0; i < n;) {
    if (kind == SchurKind::Real && i + 1 < n && real_t(i + 1, i) != 0.0) {
      out.push_back({i, 2});
      i += 2;
    } else {
      out.push_back({i, 1});
      i += 1;
    }
  }
  return out;
}

Index SchurForm::block_of(Index position) const {
  const auto bl = blocks();
  for (std::size_t b = 0; b < bl.size(); ++b) {
    if (position >= bl[b].start && position < bl[b].start + bl[b].size) return static_cast<Index>(b);
  }
  fail(ErrorCode::IndexOutOfRange, "diagonal position " + std::to_string(position) + " out of range");
}

namespace {

void block_eigenvalues(double a, double b, double c, double d, Complex& l1, Complex& l2) {
  const double p = 0.5 * (a - d);
  const double disc = p * p + b * c;
  const double mid = 0.5 * (a + d);
  if (disc < 0.0) {
    const double im = std::sqrt(-disc);
    l1 = Complex(mid, im);
    l2 = Complex(mid, -im);
  } else {
    const double s = std::sqrt(disc);
    l1 = Complex(mid + s, 0.0);
    l2 = Complex(mid - s, 0.0);
  }
}

}  // namespace

std::vector<Complex> diagonal_eigenvalues(const SchurForm& s) {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(s.size()));
  if (s.kind == SchurKind::Complex) {
    for (Index i = 0; i < s.size(); ++i) out.push_back(s.complex_t(i, i));
    return out;
  }
  for (const auto& b : s.blocks()) {
    if (b.size == 1) {
      out.emplace_back(s.real_t(b.start, b.start), 0.0);
    } else {
      const Index i = b.start;
      Complex l1, l2;
      block_eigenvalues(s.real_t(i, i), s.real_t(i, i + 1), s.real_t(i + 1, i),
                        s.real_t(i + 1, i + 1), l1, l2);
      out.push_back(l1);
      out.push_back(l2);
    }
  }
  return out;
}

Vector upper_triangular_transpose_apply(const Matrix& t, const Vector& v, Index k) {
  if (t.rows() != t.cols() || t.cols() != v.size()) {
    fail(ErrorCode::DimensionMismatch, "triangular factor and vector sizes differ");
  }
  if (k < 0) fail(ErrorCode::BadParams, "power must be non-negative");
  Vector out = v;
  for (Index step = 0; step < k; ++step) out = t.transpose() * out;
  return out;
}

}  // namespace kschur
