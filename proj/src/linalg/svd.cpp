#include <algorithm>
#include <numeric>

#include "detail.hpp"

namespace kschur {

namespace {

constexpr int kMaxSweeps = 80;

// One-sided Jacobi on a tall (rows >= cols) matrix. On return the columns of
// a are mutually orthogonal and a_in * v = a.
void orthogonalize_columns(Matrix& a, Matrix& v) {
  const Index n = a.cols();
  v = Matrix::Identity(n, n);
  // Columns below this norm are roundoff; their direction is meaningless and
  // rotating against them need not converge.
  const double floor = static_cast<double>(std::max(a.rows(), n)) * kEps * a.norm();
  const double floor2 = floor * floor;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const Complex gamma = a.col(p).dot(a.col(q));
        const double mag = std::abs(gamma);
        if (mag == 0.0 || mag <= kEps * std::sqrt(alpha * beta) || std::min(alpha, beta) <= floor2) continue;
        rotated = true;
        const detail::JacobiRotation r = detail::jacobi_rotation(alpha, beta, gamma);
        detail::rotate_columns(a, p, q, r);
        detail::rotate_columns(v, p, q, r);
      }
    }
    if (!rotated) return;
  }
  fail(ErrorCode::NoConvergence, "one-sided Jacobi sweeps exhausted");
}

}  // namespace

EconomySvd economy_svd(const Matrix& a_in) {
  if (a_in.size() == 0) fail(ErrorCode::DimensionMismatch, "empty matrix");
  require_finite(a_in, "SVD input");
  if ((a_in.array() == Complex(0.0)).all()) fail(ErrorCode::ZeroMatrix, "SVD of the zero matrix");

  const bool flipped = a_in.rows() < a_in.cols();
  Matrix a = flipped ? Matrix(a_in.adjoint()) : a_in;
  Matrix v;
  orthogonalize_columns(a, v);

  const Index n = a.cols();
  RealVector norms(n);
  for (Index j = 0; j < n; ++j) norms(j) = a.col(j).norm();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return norms(i) > norms(j); });
  Index kept = 0;
  while (kept < n && norms(order[static_cast<std::size_t>(kept)]) > 0.0) ++kept;

  Matrix left(a.rows(), kept);
  Matrix right(n, kept);
  RealVector sigma(kept);
  for (Index k = 0; k < kept; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    sigma(k) = norms(src);
    left.col(k) = a.col(src) / norms(src);
    right.col(k) = v.col(src);
  }
  // a = A v = U Sigma, so A = U Sigma V^*. For the flipped case A^* = U Sigma V^*.
  if (flipped) return {std::move(right), std::move(sigma), std::move(left)};
  return {std::move(left), std::move(sigma), std::move(right)};
}

TruncatedSvd truncate(const EconomySvd& svd, double tol, Matrix* v_out) {
  if (!(tol > 0.0 && tol < 1.0)) fail(ErrorCode::BadParams, "truncation tolerance must lie in (0, 1)");
  const double cut = tol * svd.sigma(0);
  Index r = 0;
  while (r < svd.sigma.size() && svd.sigma(r) > cut) ++r;
  if (r == 0) fail(ErrorCode::RankCollapse, "no singular value above the truncation threshold");
  const double total = svd.sigma.squaredNorm();
  const double kept = svd.sigma.head(r).squaredNorm();
  TruncatedSvd out;
  out.w = svd.w.leftCols(r);
  out.sigma = svd.sigma.head(r);
  out.truncation_tol = tol;
  out.discarded_mass = total > 0.0 ? std::max(0.0, (total - kept) / total) : 0.0;
  if (v_out != nullptr) *v_out = svd.v.leftCols(r);
  return out;
}

TruncatedSvd truncated_svd_from_gram(const Matrix& cxx, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) fail(ErrorCode::BadParams, "truncation tolerance must lie in (0, 1)");
  const HermitianEig eig = hermitian_eig(cxx);
  const Index m = eig.values.size();
  RealVector sigma(m);
  for (Index i = 0; i < m; ++i) sigma(i) = std::sqrt(std::max(eig.values(i), 0.0));
  if (sigma(0) == 0.0) fail(ErrorCode::ZeroMatrix, "Gram matrix has no positive eigenvalue");
  const double cut = tol * sigma(0);
  Index r = 0;
  while (r < m && sigma(r) > cut) ++r;
  const double total = sigma.squaredNorm();
  const double kept = sigma.head(r).squaredNorm();
  TruncatedSvd out;
  out.w = eig.vectors.leftCols(r);
  out.sigma = sigma.head(r);
  out.truncation_tol = tol;
  out.discarded_mass = std::max(0.0, (total - kept) / total);
  return out;
}

}  // namespace kschur
