#include <doctest.h>

#include <random>

#include "kschur/kernels.hpp"
#include "support/oracles.hpp"

using namespace kschur;

TEST_CASE("eval_kernel: linear kernel on a unit vector") {
  const Vector e1 = Vector::Unit(3, 0);
  CHECK(eval_kernel(KernelSpec::linear(), e1, e1) == Complex(1.0));
}

TEST_CASE("eval_kernel: linear kernel is y^* x") {
  Vector x(2), y(2);
  x << Complex(1.0, 2.0), Complex(0.0, -1.0);
  y << Complex(3.0, 0.0), Complex(0.0, 1.0);
  const Complex expected = std::conj(y(0)) * x(0) + std::conj(y(1)) * x(1);
  CHECK(std::abs(eval_kernel(KernelSpec::linear(), x, y) - expected) <= 1e-15);
}

TEST_CASE("eval_kernel: gaussian kernel at zero distance") {
  std::mt19937_64 rng(700);
  const Vector x = oracle::random_complex(4, 1, rng);
  CHECK(eval_kernel(KernelSpec::gaussian(0.7), x, x) == Complex(1.0));
}

TEST_CASE("eval_kernel: gaussian closed form") {
  Vector x(1), y(1);
  x << 0.0;
  y << 2.0;
  CHECK(eval_kernel(KernelSpec::gaussian(1.0), x, y).real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(eval_kernel(KernelSpec::gaussian(1.0), x, y).real() == doctest::Approx(0.135335).epsilon(1e-6));
}

TEST_CASE("eval_kernel: errors") {
  try {
    eval_kernel(KernelSpec::linear(), Vector::Ones(2), Vector::Ones(3));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  try {
    eval_kernel(KernelSpec::gaussian(0.0), Vector::Ones(2), Vector::Ones(2));
    FAIL("expected BadParams");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadParams);
  }
}

TEST_CASE("gram: orthonormal columns give the identity") {
  std::mt19937_64 rng(701);
  const Matrix q = Eigen::HouseholderQR<Matrix>(oracle::random_complex(5, 3, rng)).householderQ() *
                   Matrix::Identity(5, 3);
  const Matrix c = gram(KernelSpec::linear(), q, q);
  CHECK((c - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("gram: gaussian with a repeated column is all ones") {
  Matrix x(2, 2);
  x << 0.3, 0.3, -1.2, -1.2;
  const Matrix c = gram(KernelSpec::gaussian(0.5), x, x);
  CHECK(c == Matrix::Ones(2, 2));
}

TEST_CASE("gram: linear kernel equals the explicit cross product") {
  std::mt19937_64 rng(702);
  const Matrix x = oracle::random_complex(3, 4, rng);
  const Matrix c = gram(KernelSpec::linear(), x, x);
  Matrix direct(4, 4);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) {
      Complex acc = 0.0;
      for (Index k = 0; k < 3; ++k) acc += x(k, i) * std::conj(x(k, j));
      direct(i, j) = acc;
    }
  CHECK((c - direct).cwiseAbs().maxCoeff() <= 1e-15 * direct.cwiseAbs().maxCoeff() * 4);
  const Matrix y = oracle::random_complex(3, 5, rng);
  const Matrix cyx = gram(KernelSpec::linear(), y, x);
  CHECK(cyx.rows() == 5);
  CHECK(cyx.cols() == 4);
  CHECK((cyx - y.transpose() * x.conjugate()).cwiseAbs().maxCoeff() <= 1e-14 * cyx.cwiseAbs().maxCoeff());
}

TEST_CASE("gram: Hermitian positive semidefinite with entries in range") {
  std::mt19937_64 rng(703);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = oracle::random_real(3, 15, rng);
    for (const KernelSpec& spec : {KernelSpec::linear(), KernelSpec::gaussian(1.3)}) {
      const Matrix c = gram(spec, x, x);
      CHECK(c == c.adjoint());
      const HermitianEig e = hermitian_eig(c);
      CHECK(e.values.minCoeff() >= -1e-10 * e.values.maxCoeff());
      if (spec.kind == KernelKind::Gaussian) {
        CHECK(c.real().minCoeff() > 0.0);
        CHECK(c.real().maxCoeff() <= 1.0);
        CHECK(c.imag().cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }
}

TEST_CASE("gram: gaussian entries match the pointwise kernel") {
  std::mt19937_64 rng(704);
  const Matrix a = oracle::random_real(4, 6, rng);
  const Matrix b = oracle::random_real(4, 3, rng);
  const KernelSpec spec = KernelSpec::gaussian(2.0);
  const Matrix c = gram(spec, a, b);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 3; ++j) {
      const double d2 = (a.col(i) - b.col(j)).squaredNorm();
      CHECK(std::abs(c(i, j) - std::exp(-d2 / 8.0)) <= 1e-14);
    }
}

TEST_CASE("gram: errors") {
  try {
    gram(KernelSpec::linear(), Matrix::Ones(2, 3), Matrix::Ones(3, 3));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  Matrix bad = Matrix::Ones(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  try {
    gram(KernelSpec::linear(), bad, bad);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
}
