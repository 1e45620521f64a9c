#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "kschur/error.hpp"

namespace kschur {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(const Matrix& a, std::string_view what);
void require_finite(const RealMatrix& a, std::string_view what);
bool has_zero_imaginary_part(const Matrix& a);

// Spectral norm condition number from the singular values; +infinity when the
// smallest singular value is below cols * eps * largest.
double condition_number(const Matrix& a);

struct HermitianEig {
  RealVector values;  // descending
  Matrix vectors;     // unitary, column i pairs with values(i)
};

// Cyclic Jacobi. Input is symmetrized before iterating.
HermitianEig hermitian_eig(const Matrix& c);

struct EconomySvd {
  Matrix w;
  RealVector sigma;  // non-increasing, strictly positive
  Matrix v;
};

// One-sided Jacobi. Exactly zero singular values are dropped, so
// sigma.size() can be smaller than min(rows, cols).
EconomySvd economy_svd(const Matrix& a);

struct TruncatedSvd {
  Matrix w;
  RealVector sigma;
  double truncation_tol = 0.0;
  double discarded_mass = 0.0;

  Index rank() const { return sigma.size(); }
};

double default_truncation_tol(Index m);
double default_gram_truncation_tol(Index m);

// Keeps sigma_i > tol * sigma_1. Returns the kept right factor through v_out.
TruncatedSvd truncate(const EconomySvd& svd, double tol, Matrix* v_out = nullptr);
TruncatedSvd truncated_svd_from_gram(const Matrix& cxx, double tol);

enum class SchurKind { Complex, Real };

struct DiagonalBlock {
  Index start;
  Index size;  // 1 or 2
};

struct SchurForm {
  SchurKind kind = SchurKind::Complex;
  // Exactly one pair is populated, according to kind.
  Matrix complex_q;
  Matrix complex_t;
  RealMatrix real_q;
  RealMatrix real_t;
  std::vector<Complex> eigenvalues;  // diagonal order, + imaginary first in a pair

  Index size() const;
  Matrix q() const;
  Matrix t() const;
  std::vector<DiagonalBlock> blocks() const;
  // Index of the block containing diagonal position i.
  Index block_of(Index position) const;
};

SchurForm schur_decompose(const Matrix& a, SchurKind kind);
SchurForm schur_decompose(const RealMatrix& a);

struct ReorderedSchur {
  SchurForm form;
  Matrix theta;  // real-valued for the real form
};

// selected holds 0-based diagonal positions in the desired leading order.
ReorderedSchur reorder_schur(const SchurForm& s, const std::vector<Index>& selected);

// Re-reads eigenvalues from the diagonal (blocks) of T.
std::vector<Complex> diagonal_eigenvalues(const SchurForm& s);

// (T^T)^k v by k successive products.
Vector upper_triangular_transpose_apply(const Matrix& t, const Vector& v, Index k);

struct EigenDecomposition {
  std::vector<Complex> values;
  Matrix vectors;  // unit 2-norm columns
};

// General eigendecomposition through the complex Schur form and triangular
// back substitution. Throws NoConvergence from the Schur iteration.
EigenDecomposition eigen_decompose(const Matrix& a);

}  // namespace kschur
