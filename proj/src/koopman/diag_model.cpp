#include <algorithm>
#include <numeric>

#include "kschur/koopman.hpp"

namespace kschur {

namespace {

// Sorts eigenpairs by the canonical key.
void sort_pairs(EigenDecomposition& e) {
  std::vector<std::size_t> order(e.values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return canonical_less(e.values[i], e.values[j]); });
  EigenDecomposition sorted;
  sorted.vectors.resize(e.vectors.rows(), e.vectors.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    sorted.values.push_back(e.values[order[k]]);
    sorted.vectors.col(static_cast<Index>(k)) = e.vectors.col(static_cast<Index>(order[k]));
  }
  e = std::move(sorted);
}

EigenDecomposition diagonalize(const Matrix& a) {
  try {
    EigenDecomposition e = eigen_decompose(a);
    sort_pairs(e);
    return e;
  } catch (const Error& err) {
    if (err.code() == ErrorCode::NoConvergence) fail(ErrorCode::DiagonalizationFailure, err.what());
    throw;
  }
}

}  // namespace

DiagonalizationModel build_diag_model(const SnapshotPairs& data, const KernelSpec& kernel,
                                      std::optional<double> tol, DiagVariant variant) {
  DiagonalizationModel model;
  model.variant = variant;
  model.x_ref = data.x;
  const Matrix xt = data.x.transpose();
  if (variant == DiagVariant::Dmd) {
    const RayleighQuotient rq = rayleigh_quotient_explicit(data, tol);
    model.kernel = KernelSpec::linear();
    model.svd = rq.svd;
    model.v = rq.v;
    model.uhat = rq.uhat;
    // A = V^T Y conj(W) Sigma^-1 = U^T; A = G Lambda G^-1.
    const Matrix ahat = rq.uhat.transpose();
    const EigenDecomposition e = diagonalize(ahat);
    const Eigen::PartialPivLU<Matrix> lu(e.vectors);
    model.eigenvalues = e.values;
    model.s = lu.solve(Matrix::Identity(ahat.rows(), ahat.cols())).transpose();
    model.modes = rq.v.conjugate() * e.vectors;
    model.eigvec_condition = condition_number(e.vectors);
  } else {
    const RayleighQuotient rq = rayleigh_quotient(data, kernel, tol);
    model.kernel = kernel;
    model.svd = rq.svd;
    model.uhat = rq.uhat;
    const EigenDecomposition e = diagonalize(rq.uhat);
    model.eigenvalues = e.values;
    model.s = e.vectors;
    // Gamma^T = X conj(W) Sigma^-1 S^-T, i.e. Gamma = S^-1 (Sigma^-1 W^* X^T).
    const Matrix rhs = rq.svd.sigma.cwiseInverse().asDiagonal() * rq.svd.w.adjoint() * xt;
    model.modes = Eigen::PartialPivLU<Matrix>(model.s).solve(rhs).transpose();
    model.eigvec_condition = condition_number(model.s);
  }
  model.phi_x = model.svd.w * model.svd.sigma.asDiagonal() * model.s;
  return model;
}

Vector evaluate_eigenfunctions(const DiagonalizationModel& model, const Vector& x) {
  if (x.size() != model.x_ref.rows()) fail(ErrorCode::DimensionMismatch, "state dimension differs from model");
  if (model.variant == DiagVariant::Dmd) return model.s.transpose() * (model.v.transpose() * x);
  const Eigen::RowVectorXcd k = kernel_row(model.kernel, x, model.x_ref);
  const Eigen::RowVectorXcd row = k * model.svd.w * model.svd.sigma.cwiseInverse().asDiagonal() * model.s;
  return row.transpose();
}

SnapshotReconstruction reconstruct_snapshots(const DiagonalizationModel& model, const Matrix& x) {
  if (x.rows() != model.x_ref.rows() || x.cols() != model.x_ref.cols()) {
    fail(ErrorCode::DimensionMismatch, "snapshot matrix differs in shape from the training data");
  }
  SnapshotReconstruction out;
  out.xhat = model.modes * model.phi_x.transpose();
  out.errors = relative_column_errors(x, out.xhat);
  out.max_error = out.errors.size() > 0 ? out.errors.maxCoeff() : 0.0;
  return out;
}

Matrix forecast(const DiagonalizationModel& model, const Vector& x_current, Index horizon) {
  if (horizon < 0) fail(ErrorCode::BadParams, "horizon must be non-negative");
  Vector phi = evaluate_eigenfunctions(model, x_current);
  Vector lambda(static_cast<Index>(model.eigenvalues.size()));
  for (std::size_t i = 0; i < model.eigenvalues.size(); ++i) lambda(static_cast<Index>(i)) = model.eigenvalues[i];
  Matrix out(model.modes.rows(), horizon);
  for (Index k = 0; k < horizon; ++k) {
    phi = lambda.cwiseProduct(phi);
    out.col(k) = model.modes * phi;
  }
  return out;
}

}  // namespace kschur
