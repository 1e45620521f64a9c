#include <algorithm>
#include <numeric>

#include "kschur/koopman.hpp"

namespace kschur {

bool canonical_less(const Complex& a, const Complex& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

std::vector<Index> canonical_order(const SchurForm& s, const std::vector<bool>& spurious) {
  std::vector<Index> starts;
  for (const auto& b : s.blocks()) starts.push_back(b.start);
  const auto flagged = [&](Index pos) {
    return !spurious.empty() && spurious[static_cast<std::size_t>(pos)];
  };
  std::stable_sort(starts.begin(), starts.end(), [&](Index i, Index j) {
    if (flagged(i) != flagged(j)) return !flagged(i);
    return canonical_less(s.eigenvalues[static_cast<std::size_t>(i)],
                          s.eigenvalues[static_cast<std::size_t>(j)]);
  });
  return starts;
}

namespace {

std::vector<bool> flag_spurious(const SchurForm& s, std::optional<double> threshold) {
  std::vector<bool> out(s.eigenvalues.size(), false);
  if (!threshold) return out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(s.eigenvalues[i]) > *threshold;
  return out;
}

void require_full_state(const KoopmanSchurModel& model) {
  if (model.observable_kind != ObservableKind::FullState) {
    fail(ErrorCode::ObservableMismatch, "model does not represent the full state");
  }
}

Matrix inverse_projection(const KoopmanSchurModel& model) {
  // Q^* Sigma^-1 W^*
  return model.schur.q().adjoint() * model.svd.sigma.cwiseInverse().asDiagonal() * model.svd.w.adjoint();
}

}  // namespace

Matrix KoopmanSchurModel::z() const {
  if (dictionary != Dictionary::Explicit) fail(ErrorCode::BadParams, "Z is only formed on the explicit dictionary");
  return v * schur.q();
}

KoopmanSchurModel build_ks_model(const SnapshotPairs& data, const KsOptions& options) {
  const RayleighQuotient rq = options.dictionary == Dictionary::Explicit
                                  ? rayleigh_quotient_explicit(data, options.truncation_tol)
                                  : rayleigh_quotient(data, options.kernel, options.truncation_tol);
  KoopmanSchurModel model;
  model.dictionary = options.dictionary;
  model.kernel = options.dictionary == Dictionary::Explicit ? KernelSpec::linear() : options.kernel;
  model.x_ref = data.x;
  model.svd = rq.svd;
  model.v = rq.v;
  model.uhat = rq.uhat;

  const bool real_input = has_zero_imaginary_part(rq.uhat);
  SchurKind kind = real_input ? SchurKind::Real : SchurKind::Complex;
  if (options.schur == SchurPreference::Complex) kind = SchurKind::Complex;
  if (options.schur == SchurPreference::Real) {
    if (!real_input) fail(ErrorCode::BadParams, "real Schur form requested for complex data");
    kind = SchurKind::Real;
  }
  SchurForm schur = kind == SchurKind::Real ? schur_decompose(RealMatrix(rq.uhat.real()))
                                            : schur_decompose(rq.uhat, SchurKind::Complex);

  std::vector<bool> flags = flag_spurious(schur, options.spurious_threshold);
  std::vector<Index> order;
  if (options.order == OrderPolicy::Canonical) {
    order = canonical_order(schur, flags);
  } else {
    for (const auto& b : schur.blocks()) order.push_back(b.start);
    std::stable_partition(order.begin(), order.end(),
                          [&](Index pos) { return !flags[static_cast<std::size_t>(pos)]; });
  }
  bool identity = true;
  {
    const auto blocks = schur.blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i) identity = identity && order[i] == blocks[i].start;
  }
  model.canonical_order = options.order == OrderPolicy::Canonical;
  if (!identity) {
    try {
      schur = reorder_schur(schur, order).form;
    } catch (const SwapError&) {
      model.canonical_order = false;
    }
  }
  model.schur = std::move(schur);
  model.spurious = flag_spurious(model.schur, options.spurious_threshold);

  const Matrix q = model.schur.q();
  model.zeta_x = model.svd.w * model.svd.sigma.asDiagonal() * q;
  model.xi = inverse_projection(model) * data.x.transpose();
  model.observable_kind = ObservableKind::FullState;
  return model;
}

Vector evaluate_schur_functions(const KoopmanSchurModel& model, const Vector& x) {
  if (x.size() != model.x_ref.rows()) fail(ErrorCode::DimensionMismatch, "state dimension differs from model");
  if (model.dictionary == Dictionary::Explicit) return model.z().transpose() * x;
  const Eigen::RowVectorXcd k = kernel_row(model.kernel, x, model.x_ref);
  const Eigen::RowVectorXcd row =
      k * model.svd.w * model.svd.sigma.cwiseInverse().asDiagonal() * model.schur.q();
  return row.transpose();
}

Matrix represent_observables(const KoopmanSchurModel& model, const Matrix& g) {
  if (g.rows() != model.x_ref.cols()) fail(ErrorCode::DimensionMismatch, "observable matrix needs one row per snapshot");
  return inverse_projection(model) * g;
}

KoopmanSchurModel with_observables(KoopmanSchurModel model, const Matrix& g) {
  model.xi = represent_observables(model, g);
  model.observable_kind = ObservableKind::Custom;
  return model;
}

RealVector relative_column_errors(const Matrix& x, const Matrix& xhat) {
  const double floor = kEps * x.norm();
  RealVector out(x.cols());
  for (Index i = 0; i < x.cols(); ++i) {
    const double err = (x.col(i) - xhat.col(i)).norm();
    const double nx = x.col(i).norm();
    out(i) = nx < floor || nx == 0.0 ? err : err / nx;
  }
  return out;
}

SnapshotReconstruction reconstruct_snapshots(const KoopmanSchurModel& model, const Matrix& x) {
  require_full_state(model);
  if (x.rows() != model.x_ref.rows() || x.cols() != model.x_ref.cols()) {
    fail(ErrorCode::DimensionMismatch, "snapshot matrix differs in shape from the training data");
  }
  SnapshotReconstruction out;
  out.xhat = model.xi.transpose() * model.zeta_x.transpose();
  out.errors = relative_column_errors(x, out.xhat);
  out.max_error = out.errors.size() > 0 ? out.errors.maxCoeff() : 0.0;
  return out;
}

RealVector consistency_residuals(const KoopmanSchurModel& model) {
  const Index m = model.zeta_x.rows();
  if (m < 2) fail(ErrorCode::TooFewSnapshots, "need at least two snapshots");
  const Matrix t = model.schur.t();
  RealVector out(m - 1);
  for (Index j = 1; j < m; ++j) {
    out(j - 1) = (model.zeta_x.row(j) - model.zeta_x.row(j - 1) * t).norm();
  }
  return out;
}

Matrix forecast(const KoopmanSchurModel& model, const Vector& x_current, Index horizon) {
  require_full_state(model);
  if (horizon < 0) fail(ErrorCode::BadParams, "horizon must be non-negative");
  const Matrix t = model.schur.t();
  const Matrix xi_t = model.xi.transpose();
  Vector zeta = evaluate_schur_functions(model, x_current);
  Matrix out(xi_t.rows(), horizon);
  for (Index k = 0; k < horizon; ++k) {
    zeta = upper_triangular_transpose_apply(t, zeta, 1);
    out.col(k) = xi_t * zeta;
  }
  return out;
}

}  // namespace kschur
