#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dtnn/kernels.hpp"
#include "oracles.hpp"

namespace dtnn {
namespace {

bool bitwise_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && std::equal(a.data(), a.data() + a.size(), b.data());
}

// Row counts straddle the kernel block size so partial blocks are covered.
class KernelTest : public ::testing::TestWithParam<int> {
 protected:
  std::mt19937_64 gen{static_cast<std::uint64_t>(GetParam())};
  const Eigen::Index rows = 700;
  const Eigen::Index cols = 9;
};

TEST_P(KernelTest, ApplyToTubes) {
  const Matrix tubes = oracle::random_matrix(rows, cols, gen);
  const Matrix a = oracle::random_matrix(5, cols, gen);
  Matrix s(rows, 5), p(rows, 5);
  kernels::serial::apply_to_tubes(tubes, a, s);
  kernels::omp::apply_to_tubes(tubes, a, p, GetParam());
  EXPECT_TRUE(bitwise_equal(s, p));
  for (Eigen::Index r = 0; r < rows; r += 37)
    for (Eigen::Index c = 0; c < 5; ++c) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < cols; ++k) acc += tubes(r, k) * a(c, k);
      EXPECT_NEAR(s(r, c), acc, 1e-12);
    }
}

TEST_P(KernelTest, RankOneUpdate) {
  const Matrix e0 = oracle::random_matrix(rows, cols, gen);
  const Vector z = oracle::random_matrix(rows, 1, gen);
  const Vector d = oracle::random_matrix(cols, 1, gen);
  Matrix s = e0, p = e0;
  kernels::serial::rank_one_update(s, z, d, -0.75);
  kernels::omp::rank_one_update(p, z, d, -0.75, GetParam());
  EXPECT_TRUE(bitwise_equal(s, p));
  for (Eigen::Index r = 0; r < rows; r += 41)
    for (Eigen::Index c = 0; c < cols; ++c) EXPECT_NEAR(s(r, c), e0(r, c) - 0.75 * z(r) * d(c), 1e-13);
}

TEST_P(KernelTest, Projections) {
  const Matrix e = oracle::random_matrix(rows, cols, gen);
  const Vector d = oracle::random_matrix(cols, 1, gen);
  const Vector z = oracle::random_matrix(rows, 1, gen);
  Vector ts(rows), tp(rows), ss(cols), sp(cols);
  kernels::serial::tube_projection(e, d, ts);
  kernels::omp::tube_projection(e, d, tp, GetParam());
  kernels::serial::slice_projection(e, z, ss);
  kernels::omp::slice_projection(e, z, sp, GetParam());
  EXPECT_TRUE(bitwise_equal(ts, tp));
  EXPECT_TRUE(bitwise_equal(ss, sp));
  for (Eigen::Index r = 0; r < rows; r += 53) {
    double acc = 0.0;
    for (Eigen::Index c = 0; c < cols; ++c) acc += e(r, c) * d(c);
    EXPECT_NEAR(ts(r), acc, 1e-12);
  }
  for (Eigen::Index c = 0; c < cols; ++c) {
    double acc = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) acc += e(r, c) * z(r);
    EXPECT_NEAR(ss(c), acc, 1e-10);
  }
}

TEST_P(KernelTest, DftRoundTrip) {
  const Tensor3 t = oracle::random_tensor(Dims{6, 5, 7}, gen);
  ComplexTensor3 in(t.dims());
  for (std::size_t q = 0; q < t.size(); ++q) in.data()[q] = t.data()[q];
  ComplexTensor3 fs, fp, bs, bp;
  kernels::serial::dft_tubes(in, fs);
  kernels::omp::dft_tubes(in, fp, GetParam());
  EXPECT_TRUE(std::equal(fs.data().begin(), fs.data().end(), fp.data().begin()));
  kernels::serial::idft_tubes(fs, bs);
  kernels::omp::idft_tubes(fs, bp, GetParam());
  EXPECT_TRUE(std::equal(bs.data().begin(), bs.data().end(), bp.data().begin()));
  for (std::size_t q = 0; q < t.size(); ++q) EXPECT_NEAR(std::abs(bs.data()[q] - in.data()[q]), 0.0, 1e-12);
}

TEST_P(KernelTest, SvtSlices) {
  std::vector<Matrix> s, p;
  std::vector<ComplexMatrix> cs, cp;
  for (int k = 0; k < 11; ++k) {
    s.push_back(oracle::random_matrix(6, 4, gen));
    cs.push_back(s.back().cast<Complex>() + Complex(0, 1) * oracle::random_matrix(6, 4, gen).cast<Complex>());
  }
  p = s;
  cp = cs;
  const auto ns = kernels::serial::svt_slices(std::span<Matrix>(s), 0.6);
  const auto np = kernels::omp::svt_slices(std::span<Matrix>(p), 0.6, GetParam());
  const auto cns = kernels::serial::svt_slices(std::span<ComplexMatrix>(cs), 0.6);
  const auto cnp = kernels::omp::svt_slices(std::span<ComplexMatrix>(cp), 0.6, GetParam());
  EXPECT_EQ(ns, np);
  EXPECT_EQ(cns, cnp);
  for (std::size_t k = 0; k < s.size(); ++k) {
    EXPECT_TRUE(bitwise_equal(s[k], p[k]));
    EXPECT_TRUE(cs[k] == cp[k]);
    EXPECT_NEAR(ns[k], oracle::nuclear_by_augmented(s[k]), 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(Threads, KernelTest, ::testing::Values(2, 3, 4));

TEST(KernelDispatch, SingleThreadUsesSerialPath) {
  std::mt19937_64 gen(71);
  const Matrix e0 = oracle::random_matrix(300, 4, gen);
  const Vector z = oracle::random_matrix(300, 1, gen);
  const Vector d = oracle::random_matrix(4, 1, gen);
  Matrix a = e0, b = e0;
  kernels::rank_one_update(a, z, d, 2.0, 1);
  kernels::serial::rank_one_update(b, z, d, 2.0);
  EXPECT_TRUE(bitwise_equal(a, b));
}

}  // namespace
}  // namespace dtnn
