#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

#include "kschur/linalg.hpp"

namespace kschur::detail {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

inline double conj(double x) { return x; }
inline Complex conj(const Complex& x) { return std::conj(x); }
inline double re(double x) { return x; }
inline double re(const Complex& x) { return x.real(); }

// Rotation U = [[c, s*phase], [-s*conj(phase), c]] that diagonalizes the
// Hermitian 2x2 [[app, apq], [conj(apq), aqq]] via U^* A U. Returns t = s/c;
// the new diagonal is (app - t|apq|, aqq + t|apq|).
struct JacobiRotation {
  double c;
  double s;
  Complex phase;
  double t;
};

inline JacobiRotation jacobi_rotation(double app, double aqq, Complex apq) {
  const double mag = std::abs(apq);
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c, apq / mag, t};
}

// Columns p, q of m are replaced by [m_p, m_q] U.
template <class Derived>
void rotate_columns(Eigen::MatrixBase<Derived>& m, Index p, Index q, const JacobiRotation& r) {
  const Complex sp = r.s * r.phase;
  const Complex sc = r.s * std::conj(r.phase);
  for (Index k = 0; k < m.rows(); ++k) {
    const Complex mp = m(k, p);
    const Complex mq = m(k, q);
    m(k, p) = r.c * mp - sc * mq;
    m(k, q) = sp * mp + r.c * mq;
  }
}

// Givens rotation G = [[c, s], [-conj(s), c]] with G (f, g)^T = (r, 0)^T.
template <class S>
struct Givens {
  double c;
  S s;
};

template <class S>
Givens<S> make_givens(S f, S g) {
  const double gabs = std::abs(g);
  if (gabs == 0.0) return {1.0, S(0)};
  const double fabs = std::abs(f);
  if (fabs == 0.0) return {0.0, conj(g) / gabs};
  const double norm = std::hypot(fabs, gabs);
  const S phase = f / fabs;
  return {fabs / norm, phase * conj(g) / norm};
}

// Rows i, i+1 (columns c0..c1 inclusive) <- G * rows.
template <class S>
void givens_rows(Mat<S>& m, Index i, Index j, const Givens<S>& g, Index c0, Index c1) {
  for (Index k = c0; k <= c1; ++k) {
    const S a = m(i, k);
    const S b = m(j, k);
    m(i, k) = g.c * a + g.s * b;
    m(j, k) = g.c * b - conj(g.s) * a;
  }
}

// Columns i, j (rows r0..r1 inclusive) <- columns * G^*.
template <class S>
void givens_cols(Mat<S>& m, Index i, Index j, const Givens<S>& g, Index r0, Index r1) {
  for (Index k = r0; k <= r1; ++k) {
    const S a = m(k, i);
    const S b = m(k, j);
    m(k, i) = g.c * a + conj(g.s) * b;
    m(k, j) = g.c * b - g.s * a;
  }
}

// Hermitian reflector P = I - 2 u u^* / (u^* u) with P x = beta e1.
// Returns false when x already has a zero tail (no reflection needed).
template <class S>
bool make_reflector(const Vec<S>& x, Vec<S>& u, S& beta) {
  const double tail = x.size() > 1 ? x.tail(x.size() - 1).norm() : 0.0;
  if (tail == 0.0) return false;
  const double norm = std::hypot(std::abs(x(0)), tail);
  S phase = S(1);
  if (std::abs(x(0)) != 0.0) phase = x(0) / std::abs(x(0));
  beta = -phase * norm;
  u = x;
  u(0) -= beta;
  return true;
}

// m(r0.., c0..c1) <- P m on the rows touched by u.
template <class S>
void reflect_rows(Mat<S>& m, const Vec<S>& u, Index r0, Index c0, Index c1) {
  if (c1 < c0) return;
  const double scale = 2.0 / u.squaredNorm();
  auto block = m.block(r0, c0, u.size(), c1 - c0 + 1);
  const Eigen::Matrix<S, 1, Eigen::Dynamic> w = u.adjoint() * block;
  block.noalias() -= (scale * u) * w;
}

// m(r0..r1, c0..) <- m P on the columns touched by u.
template <class S>
void reflect_cols(Mat<S>& m, const Vec<S>& u, Index c0, Index r0, Index r1) {
  if (r1 < r0) return;
  const double scale = 2.0 / u.squaredNorm();
  auto block = m.block(r0, c0, r1 - r0 + 1, u.size());
  const Vec<S> w = block * u;
  block.noalias() -= (scale * w) * u.adjoint();
}

// Householder reduction to upper Hessenberg form: h <- P^* h P, q <- q P.
template <class S>
void hessenberg_reduce(Mat<S>& h, Mat<S>& q) {
  const Index n = h.rows();
  for (Index k = 0; k + 2 < n; ++k) {
    const Vec<S> x = h.col(k).segment(k + 1, n - k - 1);
    Vec<S> u;
    S beta;
    if (!make_reflector<S>(x, u, beta)) continue;
    reflect_rows<S>(h, u, k + 1, k, n - 1);
    reflect_cols<S>(h, u, k + 1, 0, n - 1);
    reflect_cols<S>(q, u, k + 1, 0, n - 1);
    h(k + 1, k) = beta;
    for (Index i = k + 2; i < n; ++i) h(i, k) = S(0);
  }
}

inline double abs1(double x) { return std::abs(x); }
inline double abs1(const Complex& x) { return std::abs(x.real()) + std::abs(x.imag()); }

}  // namespace kschur::detail

namespace kschur::detail {

// Standardizes the real 2x2 block at (i, i) of t in place (applying the
// rotation to the rest of t and to q). Returns true when the block still holds
// a complex-conjugate pair, false when it split into two real 1x1 blocks.
// extra, when given, receives the same column rotation as q.
bool standardize_block(RealMatrix& t, RealMatrix& q, Index i, RealMatrix* extra = nullptr);

// Deflation test on subdiagonal entry (i, i-1).
template <class S>
bool negligible_subdiagonal(const Mat<S>& h, Index i, double fallback) {
  double s = abs1(h(i - 1, i - 1)) + abs1(h(i, i));
  if (s == 0.0) s = fallback;
  return abs1(h(i, i - 1)) <= kEps * s;
}

}  // namespace kschur::detail
