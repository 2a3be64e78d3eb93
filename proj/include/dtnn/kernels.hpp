#pragma once

// Data-parallel inner loops shared by the solvers.
//
// Every kernel exists twice: kernels::serial is the reference, kernels::omp
// splits the same loop across OpenMP threads. Each output element is produced
// by exactly one thread with the same operation order as the serial loop, so
// the two agree bitwise for any thread count. The dispatchers at the bottom
// pick the serial path for threads <= 1.

#include <span>
#include <vector>

#include "dtnn/tensor3.hpp"
#include "dtnn/tlinalg.hpp"

namespace dtnn::kernels {

using ConstTubes = Eigen::Ref<const Matrix>;
using Tubes = Eigen::Ref<Matrix>;

namespace serial {

/// out = tubes * a^T, i.e. every tube (row) is multiplied by a.
void apply_to_tubes(const ConstTubes& tubes, const Matrix& a, Tubes out);
/// e += alpha * z * d^T
void rank_one_update(Tubes e, const Vector& z, const Vector& d, double alpha);
/// out = e * d
void tube_projection(const ConstTubes& e, const Vector& d, Eigen::Ref<Vector> out);
/// out = e^T * z
void slice_projection(const ConstTubes& e, const Vector& z, Eigen::Ref<Vector> out);
/// Unnormalized DFT along mode 3.
void dft_tubes(const ComplexTensor3& in, ComplexTensor3& out);
/// Inverse DFT along mode 3 (scaled by 1/n3).
void idft_tubes(const ComplexTensor3& in, ComplexTensor3& out);
/// In-place SVT of each slice; returns the nuclear norm of each result.
std::vector<double> svt_slices(std::span<Matrix> slices, double tau);
std::vector<double> svt_slices(std::span<ComplexMatrix> slices, double tau);

}  // namespace serial

namespace omp {

void apply_to_tubes(const ConstTubes& tubes, const Matrix& a, Tubes out, int threads);
void rank_one_update(Tubes e, const Vector& z, const Vector& d, double alpha, int threads);
void tube_projection(const ConstTubes& e, const Vector& d, Eigen::Ref<Vector> out, int threads);
void slice_projection(const ConstTubes& e, const Vector& z, Eigen::Ref<Vector> out, int threads);
void dft_tubes(const ComplexTensor3& in, ComplexTensor3& out, int threads);
void idft_tubes(const ComplexTensor3& in, ComplexTensor3& out, int threads);
std::vector<double> svt_slices(std::span<Matrix> slices, double tau, int threads);
std::vector<double> svt_slices(std::span<ComplexMatrix> slices, double tau, int threads);

}  // namespace omp

inline void apply_to_tubes(const ConstTubes& tubes, const Matrix& a, Tubes out, int threads) {
  threads > 1 ? omp::apply_to_tubes(tubes, a, out, threads) : serial::apply_to_tubes(tubes, a, out);
}
inline void rank_one_update(Tubes e, const Vector& z, const Vector& d, double alpha, int threads) {
  threads > 1 ? omp::rank_one_update(e, z, d, alpha, threads) : serial::rank_one_update(e, z, d, alpha);
}
inline void tube_projection(const ConstTubes& e, const Vector& d, Eigen::Ref<Vector> out, int threads) {
  threads > 1 ? omp::tube_projection(e, d, out, threads) : serial::tube_projection(e, d, out);
}
inline void slice_projection(const ConstTubes& e, const Vector& z, Eigen::Ref<Vector> out, int threads) {
  threads > 1 ? omp::slice_projection(e, z, out, threads) : serial::slice_projection(e, z, out);
}
inline void dft_tubes(const ComplexTensor3& in, ComplexTensor3& out, int threads) {
  threads > 1 ? omp::dft_tubes(in, out, threads) : serial::dft_tubes(in, out);
}
inline void idft_tubes(const ComplexTensor3& in, ComplexTensor3& out, int threads) {
  threads > 1 ? omp::idft_tubes(in, out, threads) : serial::idft_tubes(in, out);
}
inline std::vector<double> svt_slices(std::span<Matrix> slices, double tau, int threads) {
  return threads > 1 ? omp::svt_slices(slices, tau, threads) : serial::svt_slices(slices, tau);
}
inline std::vector<double> svt_slices(std::span<ComplexMatrix> slices, double tau, int threads) {
  return threads > 1 ? omp::svt_slices(slices, tau, threads) : serial::svt_slices(slices, tau);
}

}  // namespace dtnn::kernels
