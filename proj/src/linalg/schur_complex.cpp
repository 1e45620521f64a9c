#include <string>

#include "detail.hpp"

namespace kschur {

namespace {

// Eigenvalue of the trailing 2x2 closest to its last diagonal entry.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex p = 0.5 * (a - d);
  const Complex bc = b * c;
  Complex s = std::sqrt(p * p + bc);
  if (std::abs(p + s) < std::abs(p - s)) s = -s;
  const Complex denom = p + s;
  if (std::abs(denom) == 0.0) return d;
  return d - bc / denom;
}

void complex_qr_sweep(Matrix& h, Matrix& q, Index l, Index hi, int its) {
  const Index n = h.rows();
  Complex mu;
  if (its % 10 == 0) {
    mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
  } else {
    mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
  }
  Complex x = h(l, l) - mu;
  Complex y = h(l + 1, l);
  for (Index k = l; k < hi; ++k) {
    const detail::Givens<Complex> g = detail::make_givens<Complex>(x, y);
    const Index c0 = k > l ? k - 1 : l;
    detail::givens_rows<Complex>(h, k, k + 1, g, c0, n - 1);
    detail::givens_cols<Complex>(h, k, k + 1, g, 0, std::min(k + 2, hi));
    detail::givens_cols<Complex>(q, k, k + 1, g, 0, n - 1);
    if (k > l) h(k + 1, k - 1) = 0.0;
    if (k + 1 < hi) {
      x = h(k + 1, k);
      y = h(k + 2, k);
    }
  }
}

}  // namespace

SchurForm schur_decompose(const Matrix& a, SchurKind kind) {
  if (a.rows() != a.cols()) fail(ErrorCode::NotSquare, "Schur decomposition needs a square matrix");
  if (a.size() == 0) fail(ErrorCode::DimensionMismatch, "empty matrix");
  require_finite(a, "Schur input");
  if (kind == SchurKind::Real) {
    if (!has_zero_imaginary_part(a)) fail(ErrorCode::BadParams, "real Schur form requires real input");
    return schur_decompose(RealMatrix(a.real()));
  }
  const Index n = a.rows();
  Matrix h = a;
  Matrix q = Matrix::Identity(n, n);
  detail::hessenberg_reduce<Complex>(h, q);
  const double hnorm = h.norm();
  const long max_iter = 40L * static_cast<long>(n);
  long total = 0;
  int its = 0;

  Index hi = n - 1;
  while (hi > 0) {
    Index l = hi;
    while (l > 0) {
      if (detail::negligible_subdiagonal<Complex>(h, l, hnorm)) {
        h(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    if (l == hi) {
      --hi;
      its = 0;
      continue;
    }
    if (total >= max_iter) {
      fail(ErrorCode::NoConvergence, "complex QR iteration exceeded " + std::to_string(max_iter) + " sweeps");
    }
    ++total;
    ++its;
    complex_qr_sweep(h, q, l, hi, its);
  }
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) h(i, j) = 0.0;
  }

  SchurForm out;
  out.kind = SchurKind::Complex;
  out.complex_q = std::move(q);
  out.complex_t = std::move(h);
  out.eigenvalues = diagonal_eigenvalues(out);
  return out;
}

}  // namespace kschur
