#include "detail.hpp"

namespace kschur {

EigenDecomposition eigen_decompose(const Matrix& a) {
  const SchurForm s = schur_decompose(a, SchurKind::Complex);
  const Matrix& t = s.complex_t;
  const Index n = t.rows();
  const double big = 1e150;
  Matrix x = Matrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    const Complex lambda = t(k, k);
    // Near-singular pivots are lifted to eps * |lambda| so that defective
    // eigenvalues yield nearly parallel, not infinite, vectors.
    const double smin = std::max(kEps * detail::abs1(lambda), std::numeric_limits<double>::min() / kEps);
    Vector col = Vector::Zero(n);
    col(k) = 1.0;
    for (Index i = k - 1; i >= 0; --i) {
      Complex acc = 0.0;
      for (Index j = i + 1; j <= k; ++j) acc += t(i, j) * col(j);
      Complex pivot = t(i, i) - lambda;
      if (detail::abs1(pivot) < smin) pivot = smin;
      col(i) = -acc / pivot;
      if (std::abs(col(i)) > big) col /= std::abs(col(i));
    }
    x.col(k) = col;
  }
  EigenDecomposition out;
  out.values = s.eigenvalues;
  out.vectors = s.complex_q * x;
  for (Index k = 0; k < n; ++k) out.vectors.col(k).normalize();
  return out;
}

}  // namespace kschur
