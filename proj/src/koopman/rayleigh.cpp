#include "kschur/koopman.hpp"

namespace kschur {

namespace {

double resolve_tol(std::optional<double> tol, double fallback) {
  const double t = tol.value_or(fallback);
  if (!(t > 0.0 && t < 1.0)) fail(ErrorCode::BadParams, "truncation tolerance must lie in (0, 1)");
  return t;
}

}  // namespace

RayleighQuotient rayleigh_quotient(const SnapshotPairs& data, const KernelSpec& kernel,
                                   std::optional<double> tol) {
  validate(data);
  validate(kernel);
  const double t = resolve_tol(tol, default_gram_truncation_tol(data.count()));
  const Matrix cxx = gram(kernel, data.x, data.x);
  const Matrix cyx = gram(kernel, data.y, data.x);
  RayleighQuotient out;
  out.dictionary = Dictionary::Kernel;
  out.svd = truncated_svd_from_gram(cxx, t);
  if (out.svd.rank() == 0) fail(ErrorCode::RankCollapse, "numerical rank is zero");
  const RealVector inv = out.svd.sigma.cwiseInverse();
  out.uhat = inv.asDiagonal() * (out.svd.w.adjoint() * cyx * out.svd.w) * inv.asDiagonal();
  return out;
}

RayleighQuotient rayleigh_quotient_explicit(const SnapshotPairs& data, std::optional<double> tol) {
  validate(data);
  const double t = resolve_tol(tol, default_truncation_tol(data.count()));
  const Matrix psi_x = data.x.transpose();
  const EconomySvd full = economy_svd(psi_x);
  RayleighQuotient out;
  out.dictionary = Dictionary::Explicit;
  out.svd = truncate(full, t, &out.v);
  // Sigma^-1 W^* (Psi_y V)
  out.uhat = out.svd.sigma.cwiseInverse().asDiagonal() * (out.svd.w.adjoint() * (data.y.transpose() * out.v));
  return out;
}

}  // namespace kschur
