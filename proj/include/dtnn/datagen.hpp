#pragma once

#include <cstdint>

#include "dtnn/dictionary.hpp"
#include "dtnn/tensor3.hpp"

namespace dtnn {

struct SynthSpec {
  Dims dims;
  std::size_t atoms = 1;       // d
  std::size_t slice_rank = 1;  // r
  std::uint64_t seed = 0;

  /// Throws ArgumentError unless 1 <= r <= min(n1, n2) and d >= 1.
  void validate() const;
};

struct SynthProblem {
  Tensor3 x;        // n1 x n2 x n3, equal to z x_3 dict
  Tensor3 z;        // n1 x n2 x d, every slice of rank r
  Dictionary dict;  // n3 x d, Gaussian with unit columns
};

/// Draw order from Rng(seed): for each slice i, A (n1 x r) then B (r x n2)
/// column-major; then the dictionary column-major.
SynthProblem synth_low_rank_coded(const SynthSpec& spec);

/// tprod of Gaussian n1 x r x n3 and r x n2 x n3 tensors (tubal rank <= r).
Tensor3 synth_low_tubal_rank(Dims dims, std::size_t rank, std::uint64_t seed);

/// Exactly round(sr * n1 n2 n3) entries observed, drawn uniformly without
/// replacement. Throws ArgumentError unless 0 < sr <= 1.
ObservationMask random_mask(Dims dims, double sr, std::uint64_t seed);

/// random_mask, then a run of `missing_slices` adjacent frontal slices at a
/// seed-chosen position made fully unobserved. Requires missing_slices < n3.
ObservationMask slice_missing_mask(Dims dims, double sr, std::size_t missing_slices, std::uint64_t seed);

/// Observation tensor: gt on observed entries, zero elsewhere.
Tensor3 apply_mask(const Tensor3& gt, const ObservationMask& mask);

}  // namespace dtnn
