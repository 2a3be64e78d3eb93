#include "dtnn/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "dtnn/errors.hpp"
#include "dtnn/rng.hpp"
#include "dtnn/spectral.hpp"

namespace dtnn {
namespace {

constexpr std::uint64_t kMaskStream = 0;
constexpr std::uint64_t kSliceRunStream = 1;

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
  }
  return m;
}

}  // namespace

void SynthSpec::validate() const {
  if (dims.size() == 0) throw ArgumentError("SynthSpec: dimensions must be positive");
  if (atoms < 1) throw ArgumentError("SynthSpec: atom count must be at least 1");
  if (slice_rank < 1 || slice_rank > std::min(dims.n1, dims.n2)) {
    throw ArgumentError("SynthSpec: slice rank must lie in [1, min(n1, n2)]");
  }
}

SynthProblem synth_low_rank_coded(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto n1 = static_cast<Eigen::Index>(spec.dims.n1);
  const auto n2 = static_cast<Eigen::Index>(spec.dims.n2);
  const auto r = static_cast<Eigen::Index>(spec.slice_rank);

  Tensor3 z(Dims{spec.dims.n1, spec.dims.n2, spec.atoms});
  for (std::size_t i = 0; i < spec.atoms; ++i) {
    const Matrix a = gaussian_matrix(n1, r, rng);
    const Matrix b = gaussian_matrix(r, n2, rng);
    z.slice(i).noalias() = a * b;
  }
  Dictionary dict = Dictionary::from_columns(gaussian_matrix(static_cast<Eigen::Index>(spec.dims.n3),
                                                             static_cast<Eigen::Index>(spec.atoms), rng));
  Tensor3 x = mode3_product(z, dict.atoms());
  return SynthProblem{std::move(x), std::move(z), std::move(dict)};
}

Tensor3 synth_low_tubal_rank(Dims dims, std::size_t rank, std::uint64_t seed) {
  if (rank < 1 || rank > std::min(dims.n1, dims.n2)) {
    throw ArgumentError("synth_low_tubal_rank: rank must lie in [1, min(n1, n2)]");
  }
  Rng rng(seed);
  Tensor3 a(Dims{dims.n1, rank, dims.n3});
  Tensor3 b(Dims{rank, dims.n2, dims.n3});
  for (double& v : a.data()) v = rng.normal();
  for (double& v : b.data()) v = rng.normal();
  return tprod(a, b);
}

ObservationMask random_mask(Dims dims, double sr, std::uint64_t seed) {
  if (!(sr > 0.0 && sr <= 1.0)) throw ArgumentError("random_mask: sampling rate must lie in (0, 1]");
  const std::size_t total = dims.size();
  const auto observed = static_cast<std::size_t>(std::llround(sr * static_cast<double>(total)));

  // Partial Fisher-Yates: the first `observed` positions are the sample.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, kMaskStream);
  for (std::size_t p = 0; p < observed; ++p) {
    const std::size_t pick = p + static_cast<std::size_t>(rng.below(total - p));
    std::swap(order[p], order[pick]);
  }
  ObservationMask mask(dims, false);
  for (std::size_t p = 0; p < observed; ++p) mask.set(order[p], true);
  return mask;
}

ObservationMask slice_missing_mask(Dims dims, double sr, std::size_t missing_slices, std::uint64_t seed) {
  if (missing_slices >= dims.n3) {
    throw ArgumentError("slice_missing_mask: missing slice count " + std::to_string(missing_slices) +
                        " must be below n3 = " + std::to_string(dims.n3));
  }
  ObservationMask mask = random_mask(dims, sr, seed);
  if (missing_slices == 0) return mask;
  Rng rng(seed, kSliceRunStream);
  const std::size_t first = static_cast<std::size_t>(rng.below(dims.n3 - missing_slices + 1));
  for (std::size_t k = first; k < first + missing_slices; ++k) {
    for (std::size_t t = 0; t < dims.tubes(); ++t) mask.set(t + k * dims.tubes(), false);
  }
  return mask;
}

Tensor3 apply_mask(const Tensor3& gt, const ObservationMask& mask) {
  return project_observed(Tensor3(gt.dims()), gt, mask);
}

}  // namespace dtnn
