#include <cmath>
#include <algorithm>
#include <set>
#include <string>

#include "kschur/koopman.hpp"

namespace kschur {

ModalReconstruction subset_weighted_ls(const Matrix& x, const Matrix& b, const Matrix& c,
                                       const RealVector& omega) {
  const Index l = b.cols();
  if (l < 1 || c.cols() != l) fail(ErrorCode::DimensionMismatch, "B and C need the same positive column count");
  if (b.rows() != x.rows() || c.rows() != x.cols() || omega.size() != x.cols()) {
    fail(ErrorCode::DimensionMismatch, "X, B, C and Omega shapes disagree");
  }
  require_finite(x, "X");
  require_finite(b, "B");
  require_finite(c, "C");
  for (Index i = 0; i < omega.size(); ++i) {
    if (!(omega(i) > 0.0) || !std::isfinite(omega(i))) fail(ErrorCode::NonPositiveWeight, "weights must be positive");
  }
  const RealVector w2 = omega.cwiseAbs2();
  // [(B^* B) o (C^* Omega^2 C)] alpha = [conj(C)^T o (B^* X Omega^2)] 1
  const Matrix system = (b.adjoint() * b).cwiseProduct(c.adjoint() * w2.asDiagonal() * c);
  const Matrix weighted = b.adjoint() * x * w2.asDiagonal();
  const Vector rhs = c.adjoint().cwiseProduct(weighted).rowwise().sum();
  if (condition_number(system) > 1e12) {
    fail(ErrorCode::SingularSystem, "Khatri-Rao product is numerically rank deficient");
  }
  ModalReconstruction out;
  out.coefficients = system.ldlt().solve(rhs);
  out.weights = omega;
  const Matrix residual = (x - b * out.coefficients.asDiagonal() * c.transpose()) * omega.asDiagonal();
  out.residual_fro = residual.norm();
  return out;
}

ModalReconstruction subset_reconstruction(const KoopmanSchurModel& model, const Matrix& x,
                                          const std::vector<Index>& indices, const RealVector& omega) {
  if (model.observable_kind != ObservableKind::FullState) {
    fail(ErrorCode::ObservableMismatch, "subset reconstruction needs the full-state representation");
  }
  if (x.rows() != model.x_ref.rows() || x.cols() != model.x_ref.cols()) {
    fail(ErrorCode::DimensionMismatch, "snapshot matrix differs in shape from the training data");
  }
  if (indices.empty()) fail(ErrorCode::BadParams, "empty selection");
  const Index r = model.rank();
  const std::set<Index> chosen(indices.begin(), indices.end());
  for (Index idx : indices) {
    if (idx < 0 || idx >= r) fail(ErrorCode::IndexOutOfRange, "selected index " + std::to_string(idx) + " out of range");
  }
  if (chosen.size() != indices.size()) fail(ErrorCode::BadParams, "selected indices must be distinct");
  if (model.schur.kind == SchurKind::Real) {
    for (const auto& blk : model.schur.blocks()) {
      if (blk.size == 2 && chosen.count(blk.start) != chosen.count(blk.start + 1)) {
        fail(ErrorCode::PairSplit, "selection splits the conjugate pair at positions " +
                                       std::to_string(blk.start) + ", " + std::to_string(blk.start + 1));
      }
    }
  }
  const Index l = static_cast<Index>(indices.size());
  const ReorderedSchur re = reorder_schur(model.schur, indices);
  const Matrix ql = re.form.q().leftCols(l);
  const Matrix c = model.svd.w * model.svd.sigma.asDiagonal() * ql;
  const Matrix xi_l = ql.adjoint() * model.svd.sigma.cwiseInverse().asDiagonal() * model.svd.w.adjoint() * x.transpose();
  ModalReconstruction out = subset_weighted_ls(x, xi_l.transpose(), c, omega);
  out.selected_indices = indices;
  return out;
}

}  // namespace kschur
