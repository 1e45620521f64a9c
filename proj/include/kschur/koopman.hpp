#pragma once

#include <optional>
#include <vector>

#include "kschur/kernels.hpp"
#include "kschur/linalg.hpp"

namespace kschur {

struct SnapshotPairs {
  Matrix x;  // n x m
  Matrix y;  // n x m, y_i = F(x_i)
  double dt = 1.0;

  Index dim() const { return x.rows(); }
  Index count() const { return x.cols(); }

  // z_1..z_{m+1} -> X = (z_1..z_m), Y = (z_2..z_{m+1}).
  static SnapshotPairs from_trajectory(const Matrix& z, double dt = 1.0);
  // Pairs of every trajectory, concatenated in order.
  static SnapshotPairs from_trajectories(const std::vector<Matrix>& zs, double dt = 1.0);
};

void validate(const SnapshotPairs& data);

// Explicit: Psi_x = X^T is formed and factored directly (DMD, KS-SSMD).
// Kernel: only the Gram matrices are formed (EDMD, KS-ESSMD).
enum class Dictionary { Explicit, Kernel };

struct RayleighQuotient {
  Dictionary dictionary = Dictionary::Kernel;
  TruncatedSvd svd;
  Matrix v;  // N x r right factor, explicit dictionary only
  Matrix uhat;

  double kappa_psi_x() const { return svd.sigma(0) / svd.sigma(svd.rank() - 1); }
};

// Omitted tolerances fall back to default_gram_truncation_tol(m) on the
// kernel route and default_truncation_tol(m) on the explicit one.
RayleighQuotient rayleigh_quotient(const SnapshotPairs& data, const KernelSpec& kernel,
                                   std::optional<double> tol = std::nullopt);
RayleighQuotient rayleigh_quotient_explicit(const SnapshotPairs& data,
                                            std::optional<double> tol = std::nullopt);

enum class SchurPreference { Auto, Complex, Real };
enum class OrderPolicy { Canonical, AsComputed };
enum class ObservableKind { FullState, Custom };

struct KsOptions {
  Dictionary dictionary = Dictionary::Kernel;
  KernelSpec kernel;
  std::optional<double> truncation_tol;
  SchurPreference schur = SchurPreference::Auto;
  OrderPolicy order = OrderPolicy::Canonical;
  // Eigenvalues with modulus above this are flagged and moved trailing.
  std::optional<double> spurious_threshold;
};

struct KoopmanSchurModel {
  Dictionary dictionary = Dictionary::Kernel;
  KernelSpec kernel;
  Matrix x_ref;
  TruncatedSvd svd;
  Matrix v;  // explicit dictionary only
  Matrix uhat;
  SchurForm schur;
  Matrix zeta_x;  // m x r
  Matrix xi;      // r x l
  ObservableKind observable_kind = ObservableKind::FullState;
  std::vector<bool> spurious;  // per diagonal position
  // False when canonical ordering was requested but a block swap was
  // rejected; the iteration order is then kept.
  bool canonical_order = false;

  Index rank() const { return svd.rank(); }
  double kappa_psi_x() const { return svd.sigma(0) / svd.sigma(rank() - 1); }
  // Z = V Q, explicit dictionary only.
  Matrix z() const;
};

// Diagonal positions (first position of each block) in canonical order:
// descending modulus, then real part, then imaginary part; flagged positions
// trail.
std::vector<Index> canonical_order(const SchurForm& s, const std::vector<bool>& spurious);

KoopmanSchurModel build_ks_model(const SnapshotPairs& data, const KsOptions& options);

// zeta(x) as a column: (f(x, x_1) .. f(x, x_m)) W Sigma^-1 Q, transposed.
Vector evaluate_schur_functions(const KoopmanSchurModel& model, const Vector& x);

// Xi = Q^* Sigma^-1 W^* G.
Matrix represent_observables(const KoopmanSchurModel& model, const Matrix& g);

// Copy of the model representing the custom observables g (m x l).
KoopmanSchurModel with_observables(KoopmanSchurModel model, const Matrix& g);

struct SnapshotReconstruction {
  Matrix xhat;
  RealVector errors;
  double max_error = 0.0;
};

RealVector relative_column_errors(const Matrix& x, const Matrix& xhat);

SnapshotReconstruction reconstruct_snapshots(const KoopmanSchurModel& model, const Matrix& x);

struct ModalReconstruction {
  Vector coefficients;
  std::vector<Index> selected_indices;
  double residual_fro = 0.0;
  RealVector weights;
};

// argmin over alpha of |(X - B diag(alpha) C^T) Omega|_F.
ModalReconstruction subset_weighted_ls(const Matrix& x, const Matrix& b, const Matrix& c,
                                       const RealVector& omega);

// indices are 0-based diagonal positions of model.schur.
ModalReconstruction subset_reconstruction(const KoopmanSchurModel& model, const Matrix& x,
                                          const std::vector<Index>& indices, const RealVector& omega);

// Entry j-1 is |zeta(x_j) - T^T zeta(x_{j-1})|_2, j = 2..m.
RealVector consistency_residuals(const KoopmanSchurModel& model);

// Column k-1 is Xi^T (T^T)^k zeta(x_current), k = 1..horizon.
Matrix forecast(const KoopmanSchurModel& model, const Vector& x_current, Index horizon);

enum class DiagVariant { Dmd, Edmd };

struct DiagonalizationModel {
  DiagVariant variant = DiagVariant::Edmd;
  KernelSpec kernel;
  Matrix x_ref;
  TruncatedSvd svd;
  Matrix v;  // dmd only
  Matrix uhat;
  std::vector<Complex> eigenvalues;
  Matrix s;      // U S = S diag(eigenvalues)
  Matrix phi_x;  // W Sigma S
  Matrix modes;  // Gamma^T, n x r
  double eigvec_condition = 1.0;

  Index rank() const { return svd.rank(); }
  double kappa_psi_x() const { return svd.sigma(0) / svd.sigma(rank() - 1); }
};

DiagonalizationModel build_diag_model(const SnapshotPairs& data, const KernelSpec& kernel,
                                      std::optional<double> tol, DiagVariant variant);

// phi(x) as a column.
Vector evaluate_eigenfunctions(const DiagonalizationModel& model, const Vector& x);
SnapshotReconstruction reconstruct_snapshots(const DiagonalizationModel& model, const Matrix& x);
Matrix forecast(const DiagonalizationModel& model, const Vector& x_current, Index horizon);

// Ordering key shared by every method's reported spectrum.
bool canonical_less(const Complex& a, const Complex& b);

}  // namespace kschur
