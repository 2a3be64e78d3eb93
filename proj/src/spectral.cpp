#include "dtnn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/SVD>

#include "dtnn/errors.hpp"
#include "dtnn/kernels.hpp"

namespace dtnn {
namespace {

std::size_t conjugate_partner(std::size_t k, std::size_t n3) { return (n3 - k) % n3; }

ComplexTensor3 dft_forward(const Tensor3& t) {
  ComplexTensor3 out;
  kernels::serial::dft_tubes(to_complex(t), out);
  return out;
}

Tensor3 dft_inverse_real(const ComplexTensor3& t, const char* what) {
  ComplexTensor3 out;
  kernels::serial::idft_tubes(t, out);
  return real_part_checked(out, what);
}

void require_depth(const Tensor3& a, const Tensor3& b, const char* what) {
  if (a.n3() != b.n3()) {
    throw ShapeError(std::string(what) + ": depth mismatch " + std::to_string(a.n3()) + " vs " +
                     std::to_string(b.n3()));
  }
}

// Full SVD of one transform-domain slice. Self-conjugate slices (k = 0 and
// k = n3/2) are real, and decomposing them in real arithmetic keeps the
// factors real so the inverse transform is real as well.
struct FullSvd {
  ComplexMatrix u;
  Vector s;
  ComplexMatrix v;
};

FullSvd full_svd(const ComplexMatrix& slice, bool real_slice) {
  FullSvd out;
  if (real_slice) {
    Eigen::JacobiSVD<Matrix> dec(slice.real(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.u = dec.matrixU().cast<Complex>();
    out.v = dec.matrixV().cast<Complex>();
    out.s = dec.singularValues();
  } else {
    Eigen::JacobiSVD<ComplexMatrix> dec(slice, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.u = dec.matrixU();
    out.v = dec.matrixV();
    out.s = dec.singularValues();
  }
  return out;
}

}  // namespace

Matrix dct_matrix(std::size_t n) {
  Matrix c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / nn) : std::sqrt(2.0 / nn);
    for (std::size_t j = 0; j < n; ++j) {
      c(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
          scale * std::cos(std::numbers::pi * (2.0 * static_cast<double>(j) + 1.0) * static_cast<double>(k) / (2.0 * nn));
    }
  }
  return c;
}

ComplexMatrix Mode3Transform::matrix() const {
  if (kind == TransformKind::DCT) return dct_matrix(size).cast<Complex>();
  const auto n = static_cast<Eigen::Index>(size);
  ComplexMatrix f(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // Reduce k*j mod n first so the angle stays small and accurate.
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * j) % n) / static_cast<double>(n);
      f(k, j) = std::polar(1.0, angle);
    }
  }
  return f;
}

ComplexTensor3 to_complex(const Tensor3& t) {
  ComplexTensor3 out(t.dims());
  std::copy(t.data().begin(), t.data().end(), out.data().begin());
  return out;
}

Tensor3 real_part_checked(const ComplexTensor3& t, const char* what) {
  Tensor3 out(t.dims());
  double max_re = 1.0;
  double max_im = 0.0;
  auto dst = out.data();
  auto src = t.data();
  for (std::size_t p = 0; p < src.size(); ++p) {
    dst[p] = src[p].real();
    max_re = std::max(max_re, std::abs(src[p].real()));
    max_im = std::max(max_im, std::abs(src[p].imag()));
  }
  if (!(max_im <= kImagResidueTol * max_re)) {
    throw NumericError(std::string(what) + ": imaginary residue " + std::to_string(max_im) +
                       " exceeds tolerance");
  }
  return out;
}

ComplexTensor3 transform_mode3(const ComplexTensor3& t, const Mode3Transform& tr, Direction direction,
                               int threads) {
  if (tr.size != t.dims().n3) {
    throw ShapeError("transform_mode3: transform size " + std::to_string(tr.size) + " does not match depth " +
                     std::to_string(t.dims().n3));
  }
  ComplexTensor3 out(t.dims());
  if (tr.kind == TransformKind::DFT) {
    if (direction == Direction::Forward) {
      kernels::dft_tubes(t, out, threads);
    } else {
      kernels::idft_tubes(t, out, threads);
    }
    return out;
  }
  // DCT acts on real and imaginary parts independently.
  const Matrix c = dct_matrix(tr.size);
  const Matrix a = direction == Direction::Forward ? c : Matrix(c.transpose());
  const auto rows = static_cast<Eigen::Index>(t.dims().tubes());
  const auto cols = static_cast<Eigen::Index>(t.dims().n3);
  Eigen::Map<const Eigen::MatrixXcd> in_map(t.data().data(), rows, cols);
  Matrix re = in_map.real();
  Matrix im = in_map.imag();
  Matrix re_out(rows, cols);
  Matrix im_out(rows, cols);
  kernels::apply_to_tubes(re, a, re_out, threads);
  kernels::apply_to_tubes(im, a, im_out, threads);
  Eigen::Map<Eigen::MatrixXcd> out_map(out.data().data(), rows, cols);
  out_map.real() = re_out;
  out_map.imag() = im_out;
  return out;
}

ComplexTensor3 transform_mode3(const Tensor3& t, const Mode3Transform& tr, Direction direction, int threads) {
  return transform_mode3(to_complex(t), tr, direction, threads);
}

Tensor3 dct_mode3(const Tensor3& t, Direction direction, int threads) {
  const Matrix c = dct_matrix(t.n3());
  Tensor3 out(t.dims());
  if (direction == Direction::Forward) {
    kernels::apply_to_tubes(t.tube_matrix(), c, out.tube_matrix(), threads);
  } else {
    kernels::apply_to_tubes(t.tube_matrix(), c.transpose(), out.tube_matrix(), threads);
  }
  return out;
}

Tensor3 identity_tensor(std::size_t n, std::size_t n3) {
  Tensor3 out(Dims{n, n, n3});
  if (n3 > 0) out.slice(0).setIdentity();
  return out;
}

Tensor3 tprod(const Tensor3& a, const Tensor3& b) {
  require_depth(a, b, "tprod");
  if (a.n2() != b.n1()) {
    throw ShapeError("tprod: inner dimensions " + std::to_string(a.n2()) + " and " + std::to_string(b.n1()) +
                     " differ");
  }
  const std::size_t n3 = a.n3();
  const ComplexTensor3 fa = dft_forward(a);
  const ComplexTensor3 fb = dft_forward(b);
  ComplexTensor3 fc(Dims{a.n1(), b.n2(), n3});
  for (std::size_t k = 0; k < n3; ++k) fc.slice(k).noalias() = fa.slice(k) * fb.slice(k);
  return dft_inverse_real(fc, "tprod");
}

Tensor3 facewise_product(const Tensor3& a, const Tensor3& b) {
  require_depth(a, b, "facewise_product");
  if (a.n2() != b.n1()) {
    throw ShapeError("facewise_product: slice shapes do not conform");
  }
  Tensor3 out(Dims{a.n1(), b.n2(), a.n3()});
  for (std::size_t k = 0; k < a.n3(); ++k) out.slice(k).noalias() = a.slice(k) * b.slice(k);
  return out;
}

Tensor3 conj_transpose(const Tensor3& a) {
  const std::size_t n3 = a.n3();
  Tensor3 out(Dims{a.n2(), a.n1(), n3});
  for (std::size_t k = 0; k < n3; ++k) out.slice(k) = a.slice(conjugate_partner(k, n3)).transpose();
  return out;
}

TSvd tsvd(const Tensor3& a) {
  const Dims d = a.dims();
  const std::size_t n3 = d.n3;
  const ComplexTensor3 fa = dft_forward(a);
  ComplexTensor3 fu(Dims{d.n1, d.n1, n3});
  ComplexTensor3 fs(Dims{d.n1, d.n2, n3});
  ComplexTensor3 fv(Dims{d.n2, d.n2, n3});
  for (std::size_t k = 0; k < n3; ++k) {
    const std::size_t partner = conjugate_partner(k, n3);
    if (partner < k) {
      fu.slice(k) = fu.slice(partner).conjugate();
      fs.slice(k) = fs.slice(partner).conjugate();
      fv.slice(k) = fv.slice(partner).conjugate();
      continue;
    }
    const FullSvd f = full_svd(fa.slice(k), partner == k);
    fu.slice(k) = f.u;
    fv.slice(k) = f.v;
    fs.slice(k).setZero();
    for (Eigen::Index r = 0; r < f.s.size(); ++r) fs.slice(k)(r, r) = f.s[r];
  }
  return TSvd{dft_inverse_real(fu, "tsvd"), dft_inverse_real(fs, "tsvd"), dft_inverse_real(fv, "tsvd")};
}

Tensor3 tsvd_approximation(const Tensor3& a, std::size_t r) {
  const Dims d = a.dims();
  const std::size_t n3 = d.n3;
  const ComplexTensor3 fa = dft_forward(a);
  ComplexTensor3 fx(d);
  for (std::size_t k = 0; k < n3; ++k) {
    const std::size_t partner = conjugate_partner(k, n3);
    if (partner < k) {
      fx.slice(k) = fx.slice(partner).conjugate();
      continue;
    }
    const FullSvd f = full_svd(fa.slice(k), partner == k);
    const auto keep = static_cast<Eigen::Index>(std::min<std::size_t>(r, static_cast<std::size_t>(f.s.size())));
    fx.slice(k) = f.u.leftCols(keep) * f.s.head(keep).cast<Complex>().asDiagonal() * f.v.leftCols(keep).adjoint();
  }
  return dft_inverse_real(fx, "tsvd_approximation");
}

std::vector<std::size_t> multi_rank(const Tensor3& a) {
  const std::size_t n3 = a.n3();
  const ComplexTensor3 fa = dft_forward(a);
  std::vector<Vector> spectra(n3);
  double global_max = 0.0;
  for (std::size_t k = 0; k < n3; ++k) {
    spectra[k] = svd(ComplexMatrix(fa.slice(k))).s;
    if (spectra[k].size() > 0) global_max = std::max(global_max, spectra[k].maxCoeff());
  }
  std::vector<std::size_t> ranks(n3, 0);
  for (std::size_t k = 0; k < n3; ++k) ranks[k] = numerical_rank(spectra[k], global_max);
  return ranks;
}

std::size_t tubal_rank(const Tensor3& a) {
  const auto ranks = multi_rank(a);
  return ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end());
}

double tnn(const Tensor3& a) { return transformed_nuclear_norm(a, TransformKind::DFT); }

double transformed_nuclear_norm(const Tensor3& a, TransformKind kind) {
  double total = 0.0;
  if (kind == TransformKind::DCT) {
    const Tensor3 fa = dct_mode3(a, Direction::Forward);
    for (std::size_t k = 0; k < a.n3(); ++k) total += nuclear_norm(Matrix(fa.slice(k)));
    return total;
  }
  const ComplexTensor3 fa = dft_forward(a);
  for (std::size_t k = 0; k < a.n3(); ++k) total += nuclear_norm(ComplexMatrix(fa.slice(k)));
  return total;
}

Matrix block_circulant_unfold(const Tensor3& a) {
  const auto n1 = static_cast<Eigen::Index>(a.n1());
  const auto n2 = static_cast<Eigen::Index>(a.n2());
  const std::size_t n3 = a.n3();
  Matrix out(n1 * static_cast<Eigen::Index>(n3), n2 * static_cast<Eigen::Index>(n3));
  for (std::size_t p = 0; p < n3; ++p) {
    for (std::size_t q = 0; q < n3; ++q) {
      out.block(static_cast<Eigen::Index>(p) * n1, static_cast<Eigen::Index>(q) * n2, n1, n2) =
          a.slice((p + n3 - q) % n3);
    }
  }
  return out;
}

}  // namespace dtnn
