#include <cmath>
#include <random>
#include <string>

#include "kschur/harness.hpp"

namespace kschur {

std::string to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::LinearSpectrum: return "linear_spectrum";
    case SyntheticKind::JordanBlock: return "jordan_block";
    case SyntheticKind::Rotation: return "rotation";
    case SyntheticKind::StuartLandau: return "stuart_landau_like";
  }
  return "unknown";
}

namespace {

RealMatrix random_orthogonal(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  RealMatrix g(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) g(i, j) = gauss(rng);
  }
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ();
  // Fix column signs so the factor is determined by g alone.
  const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

// Real block form when the spectrum is closed under conjugation.
bool conjugate_closed(const std::vector<Complex>& spectrum, std::vector<int>& partner) {
  const std::size_t n = spectrum.size();
  partner.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (spectrum[i].imag() == 0.0 || partner[i] >= 0) continue;
    bool found = false;
    for (std::size_t j = i + 1; j < n && !found; ++j) {
      if (partner[j] < 0 && spectrum[j] == std::conj(spectrum[i])) {
        partner[i] = static_cast<int>(j);
        partner[j] = static_cast<int>(i);
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

Matrix linear_spectrum_matrix(const SyntheticParams& p) {
  if (p.spectrum.empty()) fail(ErrorCode::BadParams, "linear_spectrum needs at least one eigenvalue");
  for (const Complex& z : p.spectrum) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) fail(ErrorCode::BadParams, "non-finite eigenvalue");
  }
  const Index n = static_cast<Index>(p.spectrum.size());
  std::vector<int> partner;
  Matrix d = Matrix::Zero(n, n);
  if (conjugate_closed(p.spectrum, partner)) {
    std::vector<bool> placed(p.spectrum.size(), false);
    Index at = 0;
    for (std::size_t i = 0; i < p.spectrum.size(); ++i) {
      if (placed[i]) continue;
      const Complex z = p.spectrum[i];
      if (partner[i] < 0) {
        d(at, at) = z.real();
        at += 1;
      } else {
        const double a = z.real(), b = std::abs(z.imag());
        d(at, at) = a;
        d(at, at + 1) = -b;
        d(at + 1, at) = b;
        d(at + 1, at + 1) = a;
        placed[static_cast<std::size_t>(partner[i])] = true;
        at += 2;
      }
      placed[i] = true;
    }
  } else {
    for (Index i = 0; i < n; ++i) d(i, i) = p.spectrum[static_cast<std::size_t>(i)];
  }
  if (p.similarity == Similarity::Identity) return d;
  std::mt19937_64 rng(p.seed);
  const RealMatrix q1 = random_orthogonal(n, rng);
  if (p.similarity == Similarity::Orthogonal) {
    const Matrix q = q1.cast<Complex>();
    return q * d * q.transpose();
  }
  const RealMatrix q2 = random_orthogonal(n, rng);
  RealVector scales(n);
  for (Index i = 0; i < n; ++i) scales(i) = n > 1 ? std::pow(10.0, static_cast<double>(i) / (n - 1)) : 1.0;
  const RealMatrix pm = q1 * scales.asDiagonal() * q2;
  const RealMatrix pinv = q2.transpose() * scales.cwiseInverse().asDiagonal() * q1.transpose();
  return pm.cast<Complex>() * d * pinv.cast<Complex>();
}

Vector default_initial(const SyntheticParams& p, Index n) {
  if (p.initial) {
    if (p.initial->size() != n) fail(ErrorCode::BadParams, "initial state has the wrong dimension");
    return *p.initial;
  }
  switch (p.kind) {
    case SyntheticKind::Rotation: return Vector::Unit(2, 0);
    case SyntheticKind::StuartLandau: return Vector::Unit(2, 0) * (0.2 * p.radius);
    default: return Vector::Ones(n);
  }
}

Eigen::Vector2d stuart_landau_rhs(const SyntheticParams& p, const Eigen::Vector2d& s) {
  const double growth = p.rate * (1.0 - s.squaredNorm() / (p.radius * p.radius));
  return {growth * s(0) - p.omega * s(1), growth * s(1) + p.omega * s(0)};
}

}  // namespace

Matrix synthetic_generator(const SyntheticParams& p) {
  switch (p.kind) {
    case SyntheticKind::LinearSpectrum:
      return linear_spectrum_matrix(p);
    case SyntheticKind::JordanBlock: {
      if (p.size < 1) fail(ErrorCode::BadParams, "jordan_block size must be positive");
      Matrix a = p.eigenvalue * Matrix::Identity(p.size, p.size);
      for (Index i = 0; i + 1 < p.size; ++i) a(i, i + 1) = 1.0;
      return a;
    }
    case SyntheticKind::Rotation: {
      if (!std::isfinite(p.angle)) fail(ErrorCode::BadParams, "rotation angle must be finite");
      Matrix a(2, 2);
      a << std::cos(p.angle), -std::sin(p.angle), std::sin(p.angle), std::cos(p.angle);
      return a;
    }
    case SyntheticKind::StuartLandau:
      break;
  }
  fail(ErrorCode::BadParams, "stuart_landau_like has no generating matrix");
}

Matrix generate_synthetic(const SyntheticParams& p) {
  if (p.m_total < 1) fail(ErrorCode::BadParams, "m_total must be at least 1");
  if (!(p.noise >= 0.0)) fail(ErrorCode::BadParams, "noise amplitude must be non-negative");
  Matrix out;
  if (p.kind == SyntheticKind::StuartLandau) {
    if (!(p.radius > 0.0) || !(p.rate > 0.0) || !(p.dt > 0.0) || p.substeps < 1 || !std::isfinite(p.omega)) {
      fail(ErrorCode::BadParams, "stuart_landau_like needs positive radius, rate, dt and substeps");
    }
    const Vector init = default_initial(p, 2);
    if (!has_zero_imaginary_part(init)) fail(ErrorCode::BadParams, "stuart_landau_like state is real");
    Eigen::Vector2d s = init.real();
    const double h = p.dt / static_cast<double>(p.substeps);
    out.resize(2, p.m_total + 1);
    out.col(0) = s.cast<Complex>();
    for (Index k = 1; k <= p.m_total; ++k) {
      for (Index sub = 0; sub < p.substeps; ++sub) {
        const Eigen::Vector2d k1 = stuart_landau_rhs(p, s);
        const Eigen::Vector2d k2 = stuart_landau_rhs(p, s + 0.5 * h * k1);
        const Eigen::Vector2d k3 = stuart_landau_rhs(p, s + 0.5 * h * k2);
        const Eigen::Vector2d k4 = stuart_landau_rhs(p, s + h * k3);
        s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      out.col(k) = s.cast<Complex>();
    }
  } else {
    const Matrix a = synthetic_generator(p);
    Vector x = default_initial(p, a.rows());
    out.resize(a.rows(), p.m_total + 1);
    out.col(0) = x;
    for (Index k = 1; k <= p.m_total; ++k) {
      x = a * x;
      out.col(k) = x;
    }
  }
  if (p.noise > 0.0) {
    std::mt19937_64 rng(p.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> gauss(0.0, p.noise);
    const bool complex_data = !has_zero_imaginary_part(out);
    for (Index j = 0; j < out.cols(); ++j) {
      for (Index i = 0; i < out.rows(); ++i) {
        const double re = gauss(rng);
        const double im = complex_data ? gauss(rng) : 0.0;
        out(i, j) += Complex(re, im);
      }
    }
  }
  require_finite(out, "synthetic trajectory");
  return out;
}

}  // namespace kschur
