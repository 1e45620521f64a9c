#pragma once

#include <string>

#include "kschur/linalg.hpp"

namespace kschur {

enum class KernelKind { Linear, Gaussian };

struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  double sigma = 0.0;  // bandwidth, gaussian only

  static KernelSpec linear() { return {}; }
  static KernelSpec gaussian(double sigma) { return {KernelKind::Gaussian, sigma}; }
};

void validate(const KernelSpec& spec);
std::string to_string(KernelKind kind);

// f(x, y): y^* x for the linear kernel, exp(-|x - y|^2 / (2 sigma^2)) for the
// gaussian one.
Complex eval_kernel(const KernelSpec& spec, const Vector& x, const Vector& y);

// Entry (i, j) = f(a_i, b_j). When a and b are the same object the result is
// symmetrized.
Matrix gram(const KernelSpec& spec, const Matrix& a, const Matrix& b);

// Row vector (f(x, b_1), ..., f(x, b_q)).
Eigen::RowVectorXcd kernel_row(const KernelSpec& spec, const Vector& x, const Matrix& b);

}  // namespace kschur
