#include "dtnn/kernels.hpp"

#include <algorithm>
#include <exception>

#include <unsupported/Eigen/FFT>

namespace dtnn::kernels {
namespace {

// Rows per work item for tube-parallel loops. Serial and OpenMP variants walk
// the same blocks so the per-element arithmetic is identical.
constexpr Eigen::Index kRowBlock = 256;

Eigen::Index block_count(Eigen::Index rows) { return (rows + kRowBlock - 1) / kRowBlock; }

void apply_block(const ConstTubes& tubes, const Matrix& a, Tubes& out, Eigen::Index b) {
  const Eigen::Index r0 = b * kRowBlock;
  const Eigen::Index len = std::min(kRowBlock, tubes.rows() - r0);
  for (Eigen::Index m = 0; m < a.rows(); ++m) {
    auto dst = out.col(m).segment(r0, len);
    dst.setZero();
    for (Eigen::Index k = 0; k < a.cols(); ++k) dst += a(m, k) * tubes.col(k).segment(r0, len);
  }
}

void rank_one_column(Tubes& e, const Vector& z, const Vector& d, double alpha, Eigen::Index k) {
  e.col(k) += (alpha * d[k]) * z;
}

void tube_projection_block(const ConstTubes& e, const Vector& d, Eigen::Ref<Vector>& out, Eigen::Index b) {
  const Eigen::Index r0 = b * kRowBlock;
  const Eigen::Index len = std::min(kRowBlock, e.rows() - r0);
  auto dst = out.segment(r0, len);
  dst.setZero();
  for (Eigen::Index k = 0; k < e.cols(); ++k) dst += d[k] * e.col(k).segment(r0, len);
}

struct TubeFft {
  Eigen::FFT<double> fft;
  std::vector<Complex> src;
  std::vector<Complex> dst;
};

void transform_tube(const ComplexTensor3& in, ComplexTensor3& out, std::size_t tube, bool inverse,
                    TubeFft& work) {
  const Dims& dims = in.dims();
  const std::size_t stride = dims.tubes();
  work.src.resize(dims.n3);
  for (std::size_t k = 0; k < dims.n3; ++k) work.src[k] = in.data()[tube + k * stride];
  if (dims.n3 == 1) {
    // kissfft has no plan for length 1; the transform is the identity there.
    out.data()[tube] = work.src[0];
    return;
  }
  if (inverse) {
    work.fft.inv(work.dst, work.src);
  } else {
    work.fft.fwd(work.dst, work.src);
  }
  for (std::size_t k = 0; k < dims.n3; ++k) out.data()[tube + k * stride] = work.dst[k];
}

void prepare_transform(const ComplexTensor3& in, ComplexTensor3& out) {
  if (!(out.dims() == in.dims())) out = ComplexTensor3(in.dims());
}

template <typename MatrixType>
double svt_one(MatrixType& m, double tau) {
  auto r = svt_with_norm(m, tau);
  m = std::move(r.value);
  return r.nuclear_norm;
}

// Exceptions must not escape an OpenMP region; the first one is rethrown
// after the loop.
template <typename MatrixType>
std::vector<double> svt_slices_parallel(std::span<MatrixType> slices, double tau, int threads) {
  std::vector<double> norms(slices.size());
  const auto n = static_cast<std::ptrdiff_t>(slices.size());
  std::exception_ptr failure;
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    const auto idx = static_cast<std::size_t>(s);
    try {
      norms[idx] = svt_one(slices[idx], tau);
    } catch (...) {
#pragma omp critical(dtnn_svt_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return norms;
}

}  // namespace

namespace serial {

void apply_to_tubes(const ConstTubes& tubes, const Matrix& a, Tubes out) {
  const Eigen::Index blocks = block_count(tubes.rows());
  for (Eigen::Index b = 0; b < blocks; ++b) apply_block(tubes, a, out, b);
}

void rank_one_update(Tubes e, const Vector& z, const Vector& d, double alpha) {
  for (Eigen::Index k = 0; k < e.cols(); ++k) rank_one_column(e, z, d, alpha, k);
}

void tube_projection(const ConstTubes& e, const Vector& d, Eigen::Ref<Vector> out) {
  const Eigen::Index blocks = block_count(e.rows());
  for (Eigen::Index b = 0; b < blocks; ++b) tube_projection_block(e, d, out, b);
}

void slice_projection(const ConstTubes& e, const Vector& z, Eigen::Ref<Vector> out) {
  for (Eigen::Index k = 0; k < e.cols(); ++k) out[k] = e.col(k).dot(z);
}

void dft_tubes(const ComplexTensor3& in, ComplexTensor3& out) {
  prepare_transform(in, out);
  TubeFft work;
  for (std::size_t t = 0; t < in.dims().tubes(); ++t) transform_tube(in, out, t, false, work);
}

void idft_tubes(const ComplexTensor3& in, ComplexTensor3& out) {
  prepare_transform(in, out);
  TubeFft work;
  for (std::size_t t = 0; t < in.dims().tubes(); ++t) transform_tube(in, out, t, true, work);
}

std::vector<double> svt_slices(std::span<Matrix> slices, double tau) {
  std::vector<double> norms(slices.size());
  for (std::size_t s = 0; s < slices.size(); ++s) norms[s] = svt_one(slices[s], tau);
  return norms;
}

std::vector<double> svt_slices(std::span<ComplexMatrix> slices, double tau) {
  std::vector<double> norms(slices.size());
  for (std::size_t s = 0; s < slices.size(); ++s) norms[s] = svt_one(slices[s], tau);
  return norms;
}

}  // namespace serial

namespace omp {

void apply_to_tubes(const ConstTubes& tubes, const Matrix& a, Tubes out, int threads) {
  const Eigen::Index blocks = block_count(tubes.rows());
#pragma omp parallel for num_threads(threads) schedule(static)
  for (Eigen::Index b = 0; b < blocks; ++b) apply_block(tubes, a, out, b);
}

void rank_one_update(Tubes e, const Vector& z, const Vector& d, double alpha, int threads) {
  const Eigen::Index cols = e.cols();
#pragma omp parallel for num_threads(threads) schedule(static)
  for (Eigen::Index k = 0; k < cols; ++k) rank_one_column(e, z, d, alpha, k);
}

void tube_projection(const ConstTubes& e, const Vector& d, Eigen::Ref<Vector> out, int threads) {
  const Eigen::Index blocks = block_count(e.rows());
#pragma omp parallel for num_threads(threads) schedule(static)
  for (Eigen::Index b = 0; b < blocks; ++b) tube_projection_block(e, d, out, b);
}

void slice_projection(const ConstTubes& e, const Vector& z, Eigen::Ref<Vector> out, int threads) {
  const Eigen::Index cols = e.cols();
#pragma omp parallel for num_threads(threads) schedule(static)
  for (Eigen::Index k = 0; k < cols; ++k) out[k] = e.col(k).dot(z);
}

void dft_tubes(const ComplexTensor3& in, ComplexTensor3& out, int threads) {
  prepare_transform(in, out);
  const auto tubes = static_cast<std::ptrdiff_t>(in.dims().tubes());
#pragma omp parallel num_threads(threads)
  {
    TubeFft work;
#pragma omp for schedule(static)
    for (std::ptrdiff_t t = 0; t < tubes; ++t) transform_tube(in, out, static_cast<std::size_t>(t), false, work);
  }
}

void idft_tubes(const ComplexTensor3& in, ComplexTensor3& out, int threads) {
  prepare_transform(in, out);
  const auto tubes = static_cast<std::ptrdiff_t>(in.dims().tubes());
#pragma omp parallel num_threads(threads)
  {
    TubeFft work;
#pragma omp for schedule(static)
    for (std::ptrdiff_t t = 0; t < tubes; ++t) transform_tube(in, out, static_cast<std::size_t>(t), true, work);
  }
}

std::vector<double> svt_slices(std::span<Matrix> slices, double tau, int threads) {
  return svt_slices_parallel(slices, tau, threads);
}

std::vector<double> svt_slices(std::span<ComplexMatrix> slices, double tau, int threads) {
  return svt_slices_parallel(slices, tau, threads);
}

}  // namespace omp
}  // namespace dtnn::kernels
