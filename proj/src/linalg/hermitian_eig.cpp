#include <algorithm>
#include <numeric>

#include "detail.hpp"

namespace kschur {

namespace {

constexpr int kMaxSweeps = 60;

inline double conj_of(double x) { return x; }
inline Complex conj_of(const Complex& x) { return std::conj(x); }
inline double real_of(double x) { return x; }
inline double real_of(const Complex& x) { return x.real(); }

// Cyclic Jacobi on a Hermitian a; accumulates rotations into v. Only columns
// are rotated, rows are mirrored from them.
template <class S>
bool jacobi_sweeps(detail::Mat<S>& a, detail::Mat<S>& v) {
  const Index n = a.rows();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const S apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = real_of(a(p, p));
        const double aqq = real_of(a(q, q));
        if (mag <= kEps * std::sqrt(std::abs(app) * std::abs(aqq)) || mag < std::numeric_limits<double>::min()) {
          continue;
        }
        rotated = true;
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const S phase = apq / mag;
        const S sp = (t * c) * phase;
        const S sc = (t * c) * conj_of(phase);
        const auto rotate = [&](detail::Mat<S>& m) {
          S* mp = &m(0, p);
          S* mq = &m(0, q);
          for (Index k = 0; k < m.rows(); ++k) {
            const S xp = mp[k], xq = mq[k];
            mp[k] = c * xp - sc * xq;
            mq[k] = sp * xp + c * xq;
          }
        };
        rotate(a);
        for (Index k = 0; k < n; ++k) {
          a(p, k) = conj_of(a(k, p));
          a(q, k) = conj_of(a(k, q));
        }
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        a(p, q) = S(0);
        a(q, p) = S(0);
        rotate(v);
      }
    }
    if (!rotated) return true;
  }
  return false;
}

template <class S>
HermitianEig finish(const detail::Mat<S>& a, const detail::Mat<S>& v) {
  const Index n = a.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return real_of(a(i, i)) > real_of(a(j, j)); });
  HermitianEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = real_of(a(src, src));
    out.vectors.col(k) = v.col(src).template cast<Complex>();
  }
  return out;
}

}  // namespace

HermitianEig hermitian_eig(const Matrix& c) {
  if (c.rows() != c.cols()) fail(ErrorCode::NotSquare, "Hermitian eigensolver needs a square matrix");
  if (c.size() == 0) fail(ErrorCode::DimensionMismatch, "empty matrix");
  require_finite(c, "Hermitian input");
  const Index n = c.rows();
  const double cmax = c.cwiseAbs().maxCoeff();
  const double asym = (c - c.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * cmax) fail(ErrorCode::NotHermitian, "asymmetry exceeds 1e-8 relative");

  Matrix a = 0.5 * (c + c.adjoint());
  for (Index i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  // Real symmetric input stays in real arithmetic.
  if (has_zero_imaginary_part(a)) {
    RealMatrix ar = a.real();
    RealMatrix vr = RealMatrix::Identity(n, n);
    if (!jacobi_sweeps(ar, vr)) fail(ErrorCode::NoConvergence, "Jacobi sweeps exhausted");
    return finish(ar, vr);
  }
  Matrix v = Matrix::Identity(n, n);
  if (!jacobi_sweeps(a, v)) fail(ErrorCode::NoConvergence, "Jacobi sweeps exhausted");
  return finish(a, v);
}

}  // namespace kschur
