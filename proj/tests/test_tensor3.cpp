#include <random>

#include <gtest/gtest.h>

#include "dtnn/errors.hpp"
#include "dtnn/tensor3.hpp"
#include "oracles.hpp"

namespace dtnn {
namespace {

TEST(Unfold3, SingletonTensor) {
  Tensor3 t(Dims{1, 1, 1}, 5.0);
  const Matrix m = unfold3(t);
  ASSERT_EQ(m.rows(), 1);
  ASSERT_EQ(m.cols(), 1);
  EXPECT_EQ(m(0, 0), 5.0);
}

TEST(Unfold3, TubeConstantColumns) {
  Tensor3 t(Dims{2, 3, 4});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 4; ++k) t(i, j, k) = static_cast<double>(k);
  const Matrix m = unfold3(t);
  for (Eigen::Index q = 0; q < m.cols(); ++q)
    for (Eigen::Index k = 0; k < 4; ++k) EXPECT_EQ(m(k, q), static_cast<double>(k));
}

TEST(Unfold3, MatchesIndexEnumeration) {
  std::mt19937_64 gen(11);
  const Tensor3 t = oracle::random_tensor(Dims{2, 3, 2}, gen);
  EXPECT_EQ(unfold3(t), oracle::unfold_by_enumeration(t));
}

TEST(Fold3, RoundTrip) {
  std::mt19937_64 gen(12);
  const Tensor3 t = oracle::random_tensor(Dims{3, 4, 5}, gen);
  EXPECT_EQ(fold3(unfold3(t), t.dims()), t);
}

TEST(Fold3, SingletonMatrix) {
  Matrix m(1, 1);
  m(0, 0) = -2.5;
  const Tensor3 t = fold3(m, Dims{1, 1, 1});
  EXPECT_EQ(t(0, 0, 0), -2.5);
}

TEST(Fold3, DistinctValuesMatchIndexOracle) {
  // 2 x 6 matrix folded to 2 x 3 x 2: entry (k, i + 2j) lands at (i, j, k).
  Matrix m(2, 6);
  for (Eigen::Index k = 0; k < 2; ++k)
    for (Eigen::Index q = 0; q < 6; ++q) m(k, q) = 10.0 * static_cast<double>(k) + static_cast<double>(q);
  const Dims d{2, 3, 2};
  const Tensor3 t = fold3(m, d);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_EQ(t.data()[oracle::offset(i, j, k, d)], 10.0 * k + static_cast<double>(i + 2 * j));
      }
}

TEST(Fold3, RejectsWrongShape) {
  EXPECT_THROW(fold3(Matrix::Zero(3, 6), Dims{2, 3, 2}), ShapeError);
  EXPECT_THROW(fold3(Matrix::Zero(2, 5), Dims{2, 3, 2}), ShapeError);
}

TEST(Mode3Product, IdentityLeavesTensor) {
  std::mt19937_64 gen(13);
  const Tensor3 t = oracle::random_tensor(Dims{3, 2, 4}, gen);
  EXPECT_EQ(mode3_product(t, Matrix::Identity(4, 4)), t);
}

TEST(Mode3Product, SumsTubes) {
  const Tensor3 t(Dims{2, 2, 3}, 1.0);
  const Tensor3 r = mode3_product(t, Matrix::Ones(1, 3));
  ASSERT_EQ(r.dims(), (Dims{2, 2, 1}));
  for (double v : r.data()) EXPECT_EQ(v, 3.0);
}

TEST(Mode3Product, MatchesTubeMatvec) {
  std::mt19937_64 gen(14);
  const Tensor3 t = oracle::random_tensor(Dims{2, 2, 4}, gen);
  const Matrix a = oracle::random_matrix(3, 4, gen);
  const Tensor3 r = mode3_product(t, a);
  const Tensor3 expect = oracle::mode3_by_tubes(t, a);
  ASSERT_EQ(r.dims(), expect.dims());
  for (std::size_t p = 0; p < r.size(); ++p) EXPECT_NEAR(r.data()[p], expect.data()[p], 1e-13);
}

TEST(Mode3Product, RejectsWrongColumnCount) {
  EXPECT_THROW(mode3_product(Tensor3(Dims{2, 2, 3}), Matrix::Zero(2, 4)), ShapeError);
}

TEST(Mode3Product, ComposesWithMatrixProduct) {
  std::mt19937_64 gen(15);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor3 t = oracle::random_tensor(Dims{3, 2, 4}, gen);
    const Matrix a = oracle::random_matrix(5, 4, gen);
    const Matrix b = oracle::random_matrix(2, 5, gen);
    const Tensor3 lhs = mode3_product(mode3_product(t, a), b);
    const Tensor3 rhs = mode3_product(t, b * a);
    for (std::size_t p = 0; p < lhs.size(); ++p) EXPECT_NEAR(lhs.data()[p], rhs.data()[p], 1e-12);
  }
}

TEST(FrobeniusNorm, Basics) {
  EXPECT_EQ(frobenius_norm(Tensor3(Dims{2, 3, 4})), 0.0);
  Tensor3 t(Dims{2, 2, 2});
  t(1, 0, 1) = 3.0;
  EXPECT_EQ(frobenius_norm(t), 3.0);
}

TEST(FrobeniusNorm, MatchesLoopAndUnfolding) {
  std::mt19937_64 gen(16);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor3 t = oracle::random_tensor(Dims{3, 4, 5}, gen);
    double sum = 0.0;
    for (double v : t.data()) sum += v * v;
    EXPECT_NEAR(frobenius_norm(t), std::sqrt(sum), 1e-12 * std::sqrt(sum));
    const double m = unfold3(t).norm();
    EXPECT_NEAR(frobenius_norm(t) * frobenius_norm(t), m * m, 1e-12 * m * m);
  }
}

TEST(ProjectObserved, AllTrueAndAllFalse) {
  std::mt19937_64 gen(17);
  const Tensor3 x = oracle::random_tensor(Dims{2, 3, 2}, gen);
  const Tensor3 o = oracle::random_tensor(Dims{2, 3, 2}, gen);
  EXPECT_EQ(project_observed(x, o, ObservationMask(x.dims(), true)), o);
  EXPECT_EQ(project_observed(x, o, ObservationMask(x.dims(), false)), x);
}

TEST(ProjectObserved, CheckerboardMatchesElementwiseSelect) {
  std::mt19937_64 gen(18);
  const Dims d{2, 2, 2};
  const Tensor3 x = oracle::random_tensor(d, gen);
  const Tensor3 o = oracle::random_tensor(d, gen);
  ObservationMask mask(d);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) mask.set(i, j, k, (i + j + k) % 2 == 0);
  const Tensor3 r = project_observed(x, o, mask);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(r(i, j, k), (i + j + k) % 2 == 0 ? o(i, j, k) : x(i, j, k));
}

TEST(ProjectObserved, Idempotent) {
  std::mt19937_64 gen(19);
  std::bernoulli_distribution coin(0.4);
  const Dims d{3, 3, 4};
  const Tensor3 x = oracle::random_tensor(d, gen);
  const Tensor3 o = oracle::random_tensor(d, gen);
  ObservationMask mask(d);
  for (std::size_t p = 0; p < d.size(); ++p) mask.set(p, coin(gen));
  const Tensor3 once = project_observed(x, o, mask);
  EXPECT_EQ(project_observed(once, o, mask), once);
}

TEST(ProjectObserved, RejectsMismatch) {
  EXPECT_THROW(project_observed(Tensor3(Dims{2, 2, 2}), Tensor3(Dims{2, 2, 3}), ObservationMask(Dims{2, 2, 2})),
               ShapeError);
}

TEST(Tensor3, RejectsBadDataLength) {
  EXPECT_THROW(Tensor3(Dims{2, 2, 2}, std::vector<double>(7)), ShapeError);
}

}  // namespace
}  // namespace dtnn
