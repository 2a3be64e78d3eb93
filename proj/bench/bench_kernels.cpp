// Serial vs OpenMP kernels. Arg 0 of every benchmark is the thread count;
// 1 selects the serial reference.
#include <random>

#include <benchmark/benchmark.h>

#include "dtnn/kernels.hpp"

namespace {

using namespace dtnn;

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n;
  Matrix m(r, c);
  for (Eigen::Index q = 0; q < m.size(); ++q) m.data()[q] = n(gen);
  return m;
}

void BM_ApplyToTubes(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  const Matrix tubes = random_matrix(200 * 200, 30, 1);
  const Matrix a = random_matrix(30, 30, 2);
  Matrix out(tubes.rows(), 30);
  for (auto _ : state) {
    kernels::apply_to_tubes(tubes, a, out, threads);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_RankOneUpdate(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  Matrix e = random_matrix(200 * 200, 30, 3);
  const Vector z = random_matrix(200 * 200, 1, 4).col(0);
  const Vector d = random_matrix(30, 1, 5).col(0);
  for (auto _ : state) {
    kernels::rank_one_update(e, z, d, 1e-9, threads);
    benchmark::DoNotOptimize(e.data());
  }
}

void BM_TubeProjection(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  const Matrix e = random_matrix(200 * 200, 30, 6);
  const Vector d = random_matrix(30, 1, 7).col(0);
  Vector out(e.rows());
  for (auto _ : state) {
    kernels::tube_projection(e, d, out, threads);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_DftTubes(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  const Dims dims{100, 100, 32};
  ComplexTensor3 in(dims), out(dims);
  const Matrix src = random_matrix(static_cast<Eigen::Index>(dims.size()), 1, 8);
  for (std::size_t q = 0; q < dims.size(); ++q) in.data()[q] = src.data()[q];
  for (auto _ : state) {
    kernels::dft_tubes(in, out, threads);
    benchmark::DoNotOptimize(out.data().data());
  }
}

void BM_SvtSlices(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  std::vector<Matrix> base;
  for (int k = 0; k < 32; ++k) base.push_back(random_matrix(60, 60, 100 + k));
  for (auto _ : state) {
    state.PauseTiming();
    std::vector<Matrix> slices = base;
    state.ResumeTiming();
    benchmark::DoNotOptimize(kernels::svt_slices(slices, 1.0, threads));
  }
}

#define THREAD_ARGS ->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond)->UseRealTime()
BENCHMARK(BM_ApplyToTubes) THREAD_ARGS;
BENCHMARK(BM_RankOneUpdate) THREAD_ARGS;
BENCHMARK(BM_TubeProjection) THREAD_ARGS;
BENCHMARK(BM_DftTubes) THREAD_ARGS;
BENCHMARK(BM_SvtSlices) THREAD_ARGS;

}  // namespace
