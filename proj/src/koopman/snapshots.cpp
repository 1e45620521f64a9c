#include <cmath>

#include "kschur/koopman.hpp"

namespace kschur {

void validate(const SnapshotPairs& data) {
  if (data.x.rows() != data.y.rows() || data.x.cols() != data.y.cols()) {
    fail(ErrorCode::DimensionMismatch, "X and Y differ in shape");
  }
  if (data.x.rows() < 1) fail(ErrorCode::DimensionMismatch, "state dimension must be at least 1");
  if (data.x.cols() < 2) fail(ErrorCode::TooFewSnapshots, "need at least two snapshot pairs");
  if (!(data.dt > 0.0 && std::isfinite(data.dt))) fail(ErrorCode::BadParams, "time step must be positive");
  require_finite(data.x, "X");
  require_finite(data.y, "Y");
}

SnapshotPairs SnapshotPairs::from_trajectory(const Matrix& z, double dt) {
  if (z.cols() < 3) fail(ErrorCode::TooFewSnapshots, "a trajectory needs at least three snapshots");
  SnapshotPairs out{z.leftCols(z.cols() - 1), z.rightCols(z.cols() - 1), dt};
  validate(out);
  return out;
}

SnapshotPairs SnapshotPairs::from_trajectories(const std::vector<Matrix>& zs, double dt) {
  if (zs.empty()) fail(ErrorCode::TooFewSnapshots, "no trajectories");
  Index total = 0;
  const Index n = zs.front().rows();
  for (const auto& z : zs) {
    if (z.rows() != n) fail(ErrorCode::DimensionMismatch, "trajectories differ in state dimension");
    if (z.cols() < 2) fail(ErrorCode::TooFewSnapshots, "a trajectory needs at least two snapshots");
    total += z.cols() - 1;
  }
  SnapshotPairs out{Matrix(n, total), Matrix(n, total), dt};
  Index at = 0;
  for (const auto& z : zs) {
    const Index k = z.cols() - 1;
    out.x.middleCols(at, k) = z.leftCols(k);
    out.y.middleCols(at, k) = z.rightCols(k);
    at += k;
  }
  validate(out);
  return out;
}

}  // namespace kschur
