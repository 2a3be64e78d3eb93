#pragma once

#include <cstddef>
#include <vector>

#include "dtnn/tensor3.hpp"
#include "dtnn/tlinalg.hpp"

namespace dtnn {

enum class TransformKind { DFT, DCT };
enum class Direction { Forward, Inverse };

/// Transform applied along mode 3.
///
/// DFT: unnormalized forward, 1/n3 on the inverse.
/// DCT: orthonormal type-II, inverse is its transpose.
struct Mode3Transform {
  TransformKind kind = TransformKind::DFT;
  std::size_t size = 0;

  /// Forward transform as an explicit size x size matrix.
  ComplexMatrix matrix() const;
};

/// Orthonormal DCT-II matrix, row k = basis function k.
Matrix dct_matrix(std::size_t n);

/// Largest imaginary magnitude tolerated when a real result is expected,
/// relative to max(1, largest real magnitude).
inline constexpr double kImagResidueTol = 1e-9;

ComplexTensor3 to_complex(const Tensor3& t);
/// Real part; throws NumericError if the imaginary residue exceeds kImagResidueTol.
Tensor3 real_part_checked(const ComplexTensor3& t, const char* what);

/// Throws ShapeError if tr.size != n3.
ComplexTensor3 transform_mode3(const ComplexTensor3& t, const Mode3Transform& tr, Direction direction,
                               int threads = 1);
ComplexTensor3 transform_mode3(const Tensor3& t, const Mode3Transform& tr, Direction direction,
                               int threads = 1);
/// Real-only DCT path.
Tensor3 dct_mode3(const Tensor3& t, Direction direction, int threads = 1);

/// n x n x n3 tensor whose first frontal slice is I and the rest zero.
Tensor3 identity_tensor(std::size_t n, std::size_t n3);

/// t-product (tube-wise circular convolution), computed slice-wise after a DFT.
Tensor3 tprod(const Tensor3& a, const Tensor3& b);

/// Slice k of the result is a(:,:,k) * b(:,:,k).
Tensor3 facewise_product(const Tensor3& a, const Tensor3& b);

/// Transpose every frontal slice, then reverse slices 2..n3.
Tensor3 conj_transpose(const Tensor3& a);

struct TSvd {
  Tensor3 u;  // n1 x n1 x n3, orthogonal
  Tensor3 s;  // n1 x n2 x n3, f-diagonal
  Tensor3 v;  // n2 x n2 x n3, orthogonal
};

/// a = u * s * v^H under the t-product.
TSvd tsvd(const Tensor3& a);

/// Best tubal-rank-r approximation (leading r singular tubes kept).
Tensor3 tsvd_approximation(const Tensor3& a, std::size_t r);

/// Per-slice ranks of the DFT-domain tensor. The zero cutoff is kRankCutoff
/// times the largest singular value over all slices.
std::vector<std::size_t> multi_rank(const Tensor3& a);
std::size_t tubal_rank(const Tensor3& a);

/// Tensor nuclear norm: sum of nuclear norms of the DFT-domain frontal slices.
double tnn(const Tensor3& a);

/// Transform-domain nuclear norm under an arbitrary transform kind.
double transformed_nuclear_norm(const Tensor3& a, TransformKind kind);

/// (n1*n3) x (n2*n3) block-circulant matrix, block (p, q) = slice (p - q) mod n3.
/// Reference construction used to cross-check the transform-domain routines.
Matrix block_circulant_unfold(const Tensor3& a);

}  // namespace dtnn
