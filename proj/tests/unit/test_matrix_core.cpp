#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "specpredict/error.hpp"
#include "specpredict/matrix_core.hpp"
#include "support/errors.hpp"
#include "support/suite.hpp"

namespace sp = specpredict;
using sp::Matrix;
using sp::testing::error_code;

namespace {

Matrix diag(std::initializer_list<double> xs) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) d(i++) = x;
  return d.cast<sp::cplx>().asDiagonal();
}

Matrix random_matrix(int q, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(q, q);
  for (int r = 0; r < q; ++r) {
    for (int c = 0; c < q; ++c) m(r, c) = sp::cplx(n(rng), n(rng));
  }
  return m;
}

}  // namespace

TEST(NormalizedMetrics, Identity) {
  const auto m = sp::normalized_metrics(Matrix::Identity(2, 2));
  EXPECT_DOUBLE_EQ(m.ntrace.real(), 1.0);
  EXPECT_DOUBLE_EQ(m.nnorm, 1.0);
  EXPECT_DOUBLE_EQ(m.det.real(), 1.0);
}

TEST(NormalizedMetrics, Zero) {
  const auto m = sp::normalized_metrics(Matrix::Zero(3, 3));
  EXPECT_EQ(m.ntrace, sp::cplx(0.0));
  EXPECT_EQ(m.nnorm, 0.0);
  EXPECT_EQ(m.det, sp::cplx(0.0));
}

TEST(NormalizedMetrics, DiagTwoZero) {
  const auto m = sp::normalized_metrics(diag({2.0, 0.0}));
  EXPECT_DOUBLE_EQ(m.ntrace.real(), 1.0);
  EXPECT_DOUBLE_EQ(m.nnorm, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(std::abs(m.det), 0.0);
}

TEST(NormalizedMetrics, TraceCyclicAndNormBound) {
  std::mt19937_64 rng(5);
  for (int q : {1, 2, 3, 5}) {
    for (int rep = 0; rep < 20; ++rep) {
      const Matrix a = random_matrix(q, rng);
      const Matrix b = random_matrix(q, rng);
      EXPECT_NEAR(std::abs(sp::normalized_trace(a * b) - sp::normalized_trace(b * a)), 0.0, 1e-12);
      EXPECT_LE(sp::normalized_norm(a * b), q * sp::normalized_norm(a) * sp::normalized_norm(b) + 1e-12);
    }
  }
}

TEST(NormalizedMetrics, RejectsNonSquare) {
  EXPECT_EQ(error_code([] { sp::normalized_trace(Matrix::Zero(2, 3)); }), sp::Errc::DimensionMismatch);
}

TEST(Hermitian, SymmetrizesWithinTolerance) {
  Matrix m = diag({1.0, 2.0});
  m(0, 1) = sp::cplx(0.5, 0.25);
  m(1, 0) = sp::cplx(0.5, -0.25) + sp::cplx(1e-14, 0.0);
  const sp::HermitianMatrix h(m);
  EXPECT_EQ(h.matrix(), h.matrix().adjoint());
}

TEST(Hermitian, RejectsLargeDefect) {
  Matrix m = diag({1.0, 2.0});
  m(0, 1) = 0.5;
  EXPECT_EQ(error_code([&] { sp::HermitianMatrix h(m); }), sp::Errc::NotHermitian);
}

TEST(Hermitian, RejectsNonFinite) {
  Matrix m = diag({1.0, std::nan("")});
  EXPECT_EQ(error_code([&] { sp::HermitianMatrix h(m); }), sp::Errc::NonFinite);
}

TEST(PrincipalSqrt, Identity) {
  const auto r = sp::principal_sqrt(sp::PositiveMatrix(Matrix::Identity(3, 3)));
  EXPECT_LT((r.matrix() - Matrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(PrincipalSqrt, Diagonal) {
  const auto r = sp::principal_sqrt(sp::PositiveMatrix(diag({4.0, 9.0})));
  EXPECT_LT((r.matrix() - diag({2.0, 3.0})).norm(), 1e-14);
}

TEST(PrincipalSqrt, SquaresBack) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Matrix a = sp::testing::random_positive(3, seed);
    const auto r = sp::principal_sqrt(sp::PositiveMatrix(a));
    EXPECT_TRUE(sp::is_positive(r.hermitian()));
    EXPECT_LE((r.matrix() * r.matrix() - a).norm(), sp::kTolSqrt * a.norm());
  }
}

TEST(PrincipalSqrt, RejectsIndefinite) {
  EXPECT_EQ(error_code([] { sp::PositiveMatrix p(diag({1.0, -1.0})); }), sp::Errc::NotPositive);
  EXPECT_EQ(error_code([] { sp::PositiveMatrix p(diag({1.0, 0.0})); }), sp::Errc::NotPositive);
}

TEST(Loewner, Examples) {
  const sp::HermitianMatrix zero(Matrix::Zero(2, 2));
  const sp::HermitianMatrix id(Matrix::Identity(2, 2));
  EXPECT_TRUE(sp::loewner_leq(zero, id));
  EXPECT_FALSE(sp::loewner_leq(id, zero));
  const sp::HermitianMatrix a(diag({1.0, 0.0}));
  const sp::HermitianMatrix b(diag({0.0, 1.0}));
  EXPECT_FALSE(sp::loewner_leq(a, b));
  EXPECT_FALSE(sp::loewner_leq(b, a));
}

TEST(Loewner, DimensionMismatch) {
  const sp::HermitianMatrix a(Matrix::Identity(2, 2));
  const sp::HermitianMatrix b(Matrix::Identity(3, 3));
  EXPECT_EQ(error_code([&] { sp::loewner_leq(a, b); }), sp::Errc::DimensionMismatch);
}

TEST(Loewner, ReflexiveAndAntisymmetric) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const sp::HermitianMatrix a(sp::testing::random_positive(3, seed));
    const sp::HermitianMatrix b(sp::testing::random_positive(3, seed + 1000));
    EXPECT_TRUE(sp::loewner_leq(a, a));
    if (sp::loewner_leq(a, b) && sp::loewner_leq(b, a)) {
      EXPECT_LT((a.matrix() - b.matrix()).norm(), 1e-10);
    }
    const sp::HermitianMatrix bigger(a.matrix() + Matrix::Identity(3, 3));
    EXPECT_TRUE(sp::loewner_leq(a, bigger));
    EXPECT_FALSE(sp::loewner_leq(bigger, a));
  }
}

TEST(LogDet, MatchesDeterminant) {
  const Matrix a = sp::testing::random_positive(4, 9);
  EXPECT_NEAR(sp::log_det_hermitian(a), std::log(a.determinant().real()), 1e-12);
  EXPECT_EQ(sp::log_det_hermitian(diag({1.0, 0.0})), -std::numeric_limits<double>::infinity());
}

TEST(Polar, Reconstructs) {
  std::mt19937_64 rng(3);
  const Matrix a = random_matrix(3, rng);
  const auto p = sp::polar_decomposition(a);
  EXPECT_LT((p.unitary * p.positive - a).norm(), 1e-12);
  EXPECT_LT((p.unitary.adjoint() * p.unitary - Matrix::Identity(3, 3)).norm(), 1e-12);
  EXPECT_TRUE(sp::is_positive(sp::HermitianMatrix(p.positive)));
}

TEST(CheckedInverse, Singular) {
  EXPECT_EQ(error_code([] { sp::checked_inverse(diag({1.0, 0.0})); }), sp::Errc::InvalidArgument);
  EXPECT_TRUE(std::isinf(sp::condition_number(diag({1.0, 0.0}))));
}
