#include "kschur/kernels.hpp"

#include <cmath>

namespace kschur {

void validate(const KernelSpec& spec) {
  if (spec.kind == KernelKind::Gaussian && !(spec.sigma > 0.0 && std::isfinite(spec.sigma))) {
    fail(ErrorCode::BadParams, "gaussian kernel needs a positive bandwidth");
  }
}

std::string to_string(KernelKind kind) { return kind == KernelKind::Linear ? "linear" : "gaussian"; }

namespace {

double gaussian_from_parts(double xx, double yy, double re_xy, double sigma) {
  const double dist2 = std::max(0.0, xx + yy - 2.0 * re_xy);
  return std::exp(-dist2 / (2.0 * sigma * sigma));
}

}  // namespace

Complex eval_kernel(const KernelSpec& spec, const Vector& x, const Vector& y) {
  validate(spec);
  if (x.size() != y.size()) fail(ErrorCode::DimensionMismatch, "kernel arguments differ in dimension");
  const Complex inner = y.dot(x);  // y^* x
  if (spec.kind == KernelKind::Linear) return inner;
  return gaussian_from_parts(x.squaredNorm(), y.squaredNorm(), inner.real(), spec.sigma);
}

Matrix gram(const KernelSpec& spec, const Matrix& a, const Matrix& b) {
  validate(spec);
  if (a.rows() != b.rows()) fail(ErrorCode::DimensionMismatch, "snapshot sets differ in state dimension");
  require_finite(a, "gram argument");
  require_finite(b, "gram argument");
  // (i, j) = b_j^* a_i = (a^T conj(b))_ij
  Matrix c = a.transpose() * b.conjugate();
  if (spec.kind == KernelKind::Gaussian) {
    const RealVector an = a.colwise().squaredNorm().transpose();
    const RealVector bn = b.colwise().squaredNorm().transpose();
    for (Index j = 0; j < c.cols(); ++j) {
      for (Index i = 0; i < c.rows(); ++i) {
        c(i, j) = gaussian_from_parts(an(i), bn(j), c(i, j).real(), spec.sigma);
      }
    }
  }
  const bool same_set = &a == &b || (a.cols() == b.cols() && a == b);
  if (same_set) c = (0.5 * (c + c.adjoint())).eval();
  require_finite(c, "Gram matrix");
  return c;
}

Eigen::RowVectorXcd kernel_row(const KernelSpec& spec, const Vector& x, const Matrix& b) {
  validate(spec);
  if (x.size() != b.rows()) fail(ErrorCode::DimensionMismatch, "state dimension differs from snapshots");
  Eigen::RowVectorXcd row = x.transpose() * b.conjugate();
  if (spec.kind == KernelKind::Gaussian) {
    const double xx = x.squaredNorm();
    for (Index j = 0; j < b.cols(); ++j) {
      row(j) = gaussian_from_parts(xx, b.col(j).squaredNorm(), row(j).real(), spec.sigma);
    }
  }
  return row;
}

}  // namespace kschur
