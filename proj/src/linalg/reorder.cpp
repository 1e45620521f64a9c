#include <algorithm>
#include <set>
#include <string>

#include "detail.hpp"

namespace kschur {

namespace {

using detail::Givens;
using detail::Mat;
using detail::Vec;

// Exchanges the adjacent 1x1 diagonal entries at j, j+1.
template <class S>
void swap_scalars(Mat<S>& t, Mat<S>& q, Mat<S>& theta, Index j) {
  const Index n = t.rows();
  const S t11 = t(j, j);
  const S t22 = t(j + 1, j + 1);
  const Givens<S> g = detail::make_givens<S>(t(j, j + 1), t22 - t11);
  if (j + 2 < n) detail::givens_rows<S>(t, j, j + 1, g, j + 2, n - 1);
  if (j > 0) detail::givens_cols<S>(t, j, j + 1, g, 0, j - 1);
  t(j, j) = t22;
  t(j + 1, j + 1) = t11;
  detail::givens_cols<S>(q, j, j + 1, g, 0, q.rows() - 1);
  detail::givens_cols<S>(theta, j, j + 1, g, 0, theta.rows() - 1);
}

// Solves K x = b (size <= 4) by Gaussian elimination with complete pivoting.
// Returns false if a pivot falls below small.
bool solve_small(RealMatrix k, RealVector b, double small, RealVector& x) {
  const Index n = k.rows();
  std::vector<Index> col_perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) col_perm[static_cast<std::size_t>(i)] = i;
  for (Index s = 0; s < n; ++s) {
    Index pr = s, pc = s;
    double best = -1.0;
    for (Index i = s; i < n; ++i) {
      for (Index j = s; j < n; ++j) {
        if (std::abs(k(i, j)) > best) {
          best = std::abs(k(i, j));
          pr = i;
          pc = j;
        }
      }
    }
    if (best <= small) return false;
    k.row(s).swap(k.row(pr));
    std::swap(b(s), b(pr));
    k.col(s).swap(k.col(pc));
    std::swap(col_perm[static_cast<std::size_t>(s)], col_perm[static_cast<std::size_t>(pc)]);
    for (Index i = s + 1; i < n; ++i) {
      const double f = k(i, s) / k(s, s);
      k.row(i).tail(n - s) -= f * k.row(s).tail(n - s);
      b(i) -= f * b(s);
    }
  }
  RealVector y(n);
  for (Index i = n - 1; i >= 0; --i) {
    double acc = b(i);
    for (Index j = i + 1; j < n; ++j) acc -= k(i, j) * y(j);
    y(i) = acc / k(i, i);
  }
  x.resize(n);
  for (Index i = 0; i < n; ++i) x(col_perm[static_cast<std::size_t>(i)]) = y(i);
  return true;
}

// Exchanges the adjacent real blocks of sizes p and r starting at j, when at
// least one of them is 2x2.
void swap_real_blocks(RealMatrix& t, RealMatrix& q, RealMatrix& theta, Index j, Index p, Index r) {
  const Index n = t.rows();
  const Index m = p + r;
  const RealMatrix d = t.block(j, j, m, m);
  const double dnorm = d.cwiseAbs().maxCoeff();
  const double thresh = std::max(10.0 * kEps * dnorm, std::numeric_limits<double>::min() / kEps);

  // T11 X - X T22 = T12 via (I kron T11 - T22^T kron I) vec X = vec T12.
  const RealMatrix t11 = d.topLeftCorner(p, p);
  const RealMatrix t22 = d.bottomRightCorner(r, r);
  const RealMatrix t12 = d.topRightCorner(p, r);
  RealMatrix k = RealMatrix::Zero(p * r, p * r);
  for (Index c = 0; c < r; ++c) {
    for (Index a = 0; a < p; ++a) {
      for (Index c2 = 0; c2 < r; ++c2) {
        for (Index a2 = 0; a2 < p; ++a2) {
          double v = 0.0;
          if (c == c2) v += t11(a, a2);
          if (a == a2) v -= t22(c2, c);
          k(c * p + a, c2 * p + a2) = v;
        }
      }
    }
  }
  RealVector rhs(p * r);
  for (Index c = 0; c < r; ++c) rhs.segment(c * p, p) = t12.col(c);
  RealVector xvec;
  const double small = std::max(kEps * dnorm, std::numeric_limits<double>::min());
  if (!solve_small(k, rhs, small, xvec)) {
    throw SwapError(j, j + p, "Sylvester equation singular to working precision");
  }

  // Orthonormal basis of span [-X; I] (first r columns of a full QR).
  RealMatrix basis(m, r);
  for (Index c = 0; c < r; ++c) {
    basis.col(c).head(p) = -xvec.segment(c * p, p);
    basis.col(c).tail(r).setZero();
    basis(p + c, c) = 1.0;
  }
  RealMatrix qf = RealMatrix::Identity(m, m);
  for (Index c = 0; c < r; ++c) {
    const Vec<double> x = basis.col(c).tail(m - c);
    Vec<double> u;
    double beta = 0.0;
    if (!detail::make_reflector<double>(x, u, beta)) continue;
    detail::reflect_rows<double>(basis, u, c, c, r - 1);
    detail::reflect_cols<double>(qf, u, c, 0, m - 1);
  }

  const RealMatrix swapped = qf.transpose() * d * qf;
  const double lower = swapped.bottomLeftCorner(p, r).cwiseAbs().maxCoeff();
  if (lower > thresh) {
    throw SwapError(j, j + p, "swap rejected: exchanged blocks not decoupled to working precision");
  }

  const RealMatrix rows = qf.transpose() * t.block(j, j, m, n - j);
  t.block(j, j, m, n - j) = rows;
  const RealMatrix cols = t.block(0, j, j + m, m) * qf;
  t.block(0, j, j + m, m) = cols;
  q.middleCols(j, m) = (q.middleCols(j, m) * qf).eval();
  theta.middleCols(j, m) = (theta.middleCols(j, m) * qf).eval();
  t.block(j + r, j, p, r).setZero();

  for (const auto& [start, size] : {std::pair<Index, Index>{j, r}, std::pair<Index, Index>{j + r, p}}) {
    if (size == 2 && !detail::standardize_block(t, q, start, &theta)) {
      throw SwapError(j, j + p, "conjugate pair collapsed onto the real axis during the swap");
    }
  }
}

struct LabeledBlock {
  Index size;
  Index label;
};

std::vector<LabeledBlock> labeled_blocks(const SchurForm& s) {
  std::vector<LabeledBlock> out;
  Index k = 0;
  for (const auto& b : s.blocks()) out.push_back({b.size, k++});
  return out;
}

Index block_start(const std::vector<LabeledBlock>& blocks, std::size_t pos) {
  Index start = 0;
  for (std::size_t i = 0; i < pos; ++i) start += blocks[i].size;
  return start;
}

}  // namespace

ReorderedSchur reorder_schur(const SchurForm& s, const std::vector<Index>& selected) {
  const Index n = s.size();
  std::set<Index> seen;
  for (Index idx : selected) {
    if (idx < 0 || idx >= n) {
      fail(ErrorCode::IndexOutOfRange, "selected index " + std::to_string(idx) + " outside [0, " +
                                           std::to_string(n) + ")");
    }
    if (!seen.insert(idx).second) fail(ErrorCode::BadParams, "selected indices must be distinct");
  }

  // Requested block order: each block enters at its first mention.
  const std::vector<DiagonalBlock> original = s.blocks();
  std::vector<Index> block_order;
  for (Index idx : selected) {
    const Index b = s.block_of(idx);
    if (std::find(block_order.begin(), block_order.end(), b) == block_order.end()) block_order.push_back(b);
  }

  std::vector<LabeledBlock> blocks = labeled_blocks(s);
  ReorderedSchur out;
  out.form = s;
  SchurForm& f = out.form;

  if (s.kind == SchurKind::Complex) {
    Matrix theta = Matrix::Identity(n, n);
    for (std::size_t target = 0; target < block_order.size(); ++target) {
      std::size_t cur = 0;
      while (blocks[cur].label != block_order[target]) ++cur;
      while (cur > target) {
        swap_scalars<Complex>(f.complex_t, f.complex_q, theta, static_cast<Index>(cur) - 1);
        std::swap(blocks[cur - 1], blocks[cur]);
        --cur;
      }
    }
    out.theta = std::move(theta);
  } else {
    RealMatrix theta = RealMatrix::Identity(n, n);
    for (std::size_t target = 0; target < block_order.size(); ++target) {
      std::size_t cur = 0;
      while (blocks[cur].label != block_order[target]) ++cur;
      while (cur > target) {
        const Index j = block_start(blocks, cur - 1);
        const Index p = blocks[cur - 1].size;
        const Index r = blocks[cur].size;
        if (p == 1 && r == 1) {
          swap_scalars<double>(f.real_t, f.real_q, theta, j);
        } else {
          swap_real_blocks(f.real_t, f.real_q, theta, j, p, r);
        }
        std::swap(blocks[cur - 1], blocks[cur]);
        --cur;
      }
    }
    out.theta = theta.cast<Complex>();
  }
  f.eigenvalues = diagonal_eigenvalues(f);
  return out;
}

}  // namespace kschur
