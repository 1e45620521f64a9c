#include <string>

#include "detail.hpp"

namespace kschur {

namespace detail {

namespace {

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Rotation (cs, sn) such that [[a, b], [c, d]] becomes standard: either upper
// triangular or equal diagonal with b*c < 0. Mirrors the classical scheme.
void lanv2(double& a, double& b, double& c, double& d, double& cs, double& sn) {
  if (c == 0.0) {
    cs = 1.0;
    sn = 0.0;
    return;
  }
  if (b == 0.0) {
    cs = 0.0;
    sn = 1.0;
    std::swap(a, d);
    b = -c;
    c = 0.0;
    return;
  }
  if (a - d == 0.0 && (b >= 0.0) != (c >= 0.0)) {
    cs = 1.0;
    sn = 0.0;
    return;
  }
  const double temp = a - d;
  double p = 0.5 * temp;
  const double bcmax = std::max(std::abs(b), std::abs(c));
  const double bcmis = std::min(std::abs(b), std::abs(c)) * sign_of(1.0, b) * sign_of(1.0, c);
  const double scale = std::max(std::abs(p), bcmax);
  double z = (p / scale) * p + (bcmax / scale) * bcmis;
  if (z >= 4.0 * kEps) {
    z = p + sign_of(std::sqrt(scale) * std::sqrt(z), p);
    a = d + z;
    d = d - (bcmax / z) * bcmis;
    const double tau = std::hypot(c, z);
    cs = z / tau;
    sn = c / tau;
    b = b - c;
    c = 0.0;
    return;
  }
  const double sigma = b + c;
  const double tau = std::hypot(sigma, temp);
  cs = std::sqrt(0.5 * (1.0 + std::abs(sigma) / tau));
  sn = -(p / (tau * cs)) * sign_of(1.0, sigma);
  const double aa = a * cs + b * sn;
  const double bb = -a * sn + b * cs;
  const double cc = c * cs + d * sn;
  const double dd = -c * sn + d * cs;
  a = aa * cs + cc * sn;
  b = bb * cs + dd * sn;
  c = -aa * sn + cc * cs;
  d = -bb * sn + dd * cs;
  const double mid = 0.5 * (a + d);
  a = mid;
  d = mid;
  if (c != 0.0) {
    if (b != 0.0) {
      if ((b >= 0.0) == (c >= 0.0)) {
        const double sab = std::sqrt(std::abs(b));
        const double sac = std::sqrt(std::abs(c));
        p = sign_of(sab * sac, c);
        const double t = 1.0 / std::sqrt(std::abs(b + c));
        a = mid + p;
        d = mid - p;
        b = b - c;
        c = 0.0;
        const double cs1 = sab * t;
        const double sn1 = sac * t;
        const double nc = cs * cs1 - sn * sn1;
        sn = cs * sn1 + sn * cs1;
        cs = nc;
      }
    } else {
      b = -c;
      c = 0.0;
      const double t = cs;
      cs = -sn;
      sn = t;
    }
  }
}

}  // namespace

bool standardize_block(RealMatrix& t, RealMatrix& q, Index i, RealMatrix* extra) {
  const Index n = t.rows();
  double a = t(i, i), b = t(i, i + 1), c = t(i + 1, i), d = t(i + 1, i + 1);
  double cs = 1.0, sn = 0.0;
  lanv2(a, b, c, d, cs, sn);
  const Givens<double> g{cs, sn};
  if (i + 2 < n) givens_rows<double>(t, i, i + 1, g, i + 2, n - 1);
  if (i > 0) givens_cols<double>(t, i, i + 1, g, 0, i - 1);
  givens_cols<double>(q, i, i + 1, g, 0, q.rows() - 1);
  if (extra != nullptr) givens_cols<double>(*extra, i, i + 1, g, 0, extra->rows() - 1);
  t(i, i) = a;
  t(i, i + 1) = b;
  t(i + 1, i) = c;
  t(i + 1, i + 1) = d;
  return c != 0.0;
}

}  // namespace detail

namespace {

using detail::Mat;
using detail::Vec;

// One implicit double-shift Francis sweep on the active window [l, hi].
void francis_sweep(RealMatrix& h, RealMatrix& q, Index l, Index hi, int its) {
  const Index n = h.rows();
  double sum, prod;
  if (its % 20 == 10) {
    const double s = std::abs(h(l + 1, l)) + std::abs(h(l + 2, l + 1));
    const double h11 = 0.75 * s + h(l, l);
    const double h12 = -0.4375 * s;
    sum = 2.0 * h11;
    prod = h11 * h11 - h12 * s;
  } else if (its % 20 == 0) {
    const double s = std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2));
    const double h11 = 0.75 * s + h(hi, hi);
    const double h12 = -0.4375 * s;
    sum = 2.0 * h11;
    prod = h11 * h11 - h12 * s;
  } else {
    const double a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
    sum = a + d;
    prod = a * d - b * c;
  }

  double x = h(l, l) * h(l, l) + h(l, l + 1) * h(l + 1, l) - sum * h(l, l) + prod;
  double y = h(l + 1, l) * (h(l, l) + h(l + 1, l + 1) - sum);
  double z = h(l + 1, l) * h(l + 2, l + 1);

  for (Index k = l; k + 2 <= hi; ++k) {
    const double scale = std::abs(x) + std::abs(y) + std::abs(z);
    if (scale != 0.0) {
      Vec<double> v(3);
      v << x / scale, y / scale, z / scale;
      Vec<double> u;
      double beta = 0.0;
      if (detail::make_reflector<double>(v, u, beta)) {
        const Index c0 = k > l ? k - 1 : l;
        detail::reflect_rows<double>(h, u, k, c0, n - 1);
        detail::reflect_cols<double>(h, u, k, 0, std::min(k + 3, hi));
        detail::reflect_cols<double>(q, u, k, 0, n - 1);
        if (k > l) {
          h(k, k - 1) = beta * scale;
          h(k + 1, k - 1) = 0.0;
          h(k + 2, k - 1) = 0.0;
        }
      }
    }
    x = h(k + 1, k);
    y = h(k + 2, k);
    if (k + 3 <= hi) z = h(k + 3, k);
  }
  // Final 2-vector at rows hi-1, hi.
  const detail::Givens<double> g = detail::make_givens<double>(x, y);
  const Index k = hi - 1;
  detail::givens_rows<double>(h, k, hi, g, k - 1 >= l ? k - 1 : l, n - 1);
  detail::givens_cols<double>(h, k, hi, g, 0, hi);
  detail::givens_cols<double>(q, k, hi, g, 0, n - 1);
  if (k - 1 >= l) h(hi, k - 1) = 0.0;
}

}  // namespace

SchurForm schur_decompose(const RealMatrix& a) {
  if (a.rows() != a.cols()) fail(ErrorCode::NotSquare, "Schur decomposition needs a square matrix");
  if (a.size() == 0) fail(ErrorCode::DimensionMismatch, "empty matrix");
  require_finite(a, "Schur input");
  const Index n = a.rows();
  RealMatrix h = a;
  RealMatrix q = RealMatrix::Identity(n, n);
  detail::hessenberg_reduce<double>(h, q);
  const double hnorm = h.norm();
  const long max_iter = 40L * static_cast<long>(n);
  long total = 0;
  int its = 0;

  Index hi = n - 1;
  while (hi >= 0) {
    Index l = hi;
    while (l > 0) {
      if (detail::negligible_subdiagonal<double>(h, l, hnorm)) {
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
    if (l == hi - 1) {
      detail::standardize_block(h, q, l);
      hi -= 2;
      its = 0;
      continue;
    }
    if (total >= max_iter) {
      fail(ErrorCode::NoConvergence, "real QR iteration exceeded " + std::to_string(max_iter) + " sweeps");
    }
    ++total;
    ++its;
    francis_sweep(h, q, l, hi, its);
  }

  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 2; i < n; ++i) h(i, j) = 0.0;
  }
  // A 2x2 block left with real eigenvalues by roundoff splits here.
  for (Index i = 0; i + 1 < n; ++i) {
    if (h(i + 1, i) != 0.0) {
      if (!detail::standardize_block(h, q, i)) h(i + 1, i) = 0.0;
      ++i;
    }
  }

  SchurForm out;
  out.kind = SchurKind::Real;
  out.real_q = std::move(q);
  out.real_t = std::move(h);
  out.eigenvalues = diagonal_eigenvalues(out);
  return out;
}

}  // namespace kschur
