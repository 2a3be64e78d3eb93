#include "dtnn/tlinalg.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "dtnn/errors.hpp"

namespace dtnn {
namespace {

template <typename MatrixType>
SvdFactors<typename MatrixType::Scalar> svd_impl(const MatrixType& m) {
  using Scalar = typename MatrixType::Scalar;
  if (!m.allFinite()) throw NumericError("svd: input contains non-finite entries");

  SvdFactors<Scalar> out;
  const Eigen::Index r = std::min(m.rows(), m.cols());
  if (r == 0) {
    out.u.resize(m.rows(), 0);
    out.v.resize(m.cols(), 0);
    return out;
  }

  Eigen::BDCSVD<MatrixType> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) throw NumericError("svd: decomposition did not converge");

  // The backend already sorts descending; re-sort stably so ties keep a
  // deterministic column order regardless of backend.
  const Vector& s = dec.singularValues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return s[a] > s[b]; });

  out.u.resize(m.rows(), r);
  out.v.resize(m.cols(), r);
  out.s.resize(r);
  for (Eigen::Index c = 0; c < r; ++c) {
    const Eigen::Index src = order[static_cast<std::size_t>(c)];
    out.s[c] = std::max(s[src], 0.0);
    out.u.col(c) = dec.matrixU().col(src);
    out.v.col(c) = dec.matrixV().col(src);
  }
  return out;
}

template <typename MatrixType>
ThresholdedMatrix<typename MatrixType::Scalar> svt_impl(const MatrixType& m, double tau) {
  if (!(tau >= 0.0)) throw ArgumentError("svt: threshold must be non-negative, got " + std::to_string(tau));
  auto f = svd_impl(m);
  ThresholdedMatrix<typename MatrixType::Scalar> out;
  Eigen::Index keep = 0;
  for (Eigen::Index c = 0; c < f.s.size(); ++c) {
    f.s[c] = std::max(f.s[c] - tau, 0.0);
    if (f.s[c] > 0.0) keep = c + 1;
    out.nuclear_norm += f.s[c];
  }
  out.value = f.u.leftCols(keep) * f.s.head(keep).asDiagonal() * f.v.leftCols(keep).adjoint();
  return out;
}

}  // namespace

SvdFactors<double> svd(const Matrix& m) { return svd_impl(m); }
SvdFactors<Complex> svd(const ComplexMatrix& m) { return svd_impl(m); }

double nuclear_norm(const Matrix& m) { return svd_impl(m).s.sum(); }
double nuclear_norm(const ComplexMatrix& m) { return svd_impl(m).s.sum(); }

std::size_t numerical_rank(const Vector& singular_values, double reference_max) {
  if (singular_values.size() == 0 || reference_max <= 0.0) return 0;
  const double cutoff = kRankCutoff * reference_max;
  std::size_t rank = 0;
  for (Eigen::Index c = 0; c < singular_values.size(); ++c) {
    if (singular_values[c] > cutoff) ++rank;
  }
  return rank;
}

std::size_t numerical_rank(const Vector& singular_values) {
  if (singular_values.size() == 0) return 0;
  return numerical_rank(singular_values, singular_values.maxCoeff());
}

Matrix svt(const Matrix& m, double tau) { return svt_impl(m, tau).value; }
ComplexMatrix svt(const ComplexMatrix& m, double tau) { return svt_impl(m, tau).value; }

ThresholdedMatrix<double> svt_with_norm(const Matrix& m, double tau) { return svt_impl(m, tau); }
ThresholdedMatrix<Complex> svt_with_norm(const ComplexMatrix& m, double tau) { return svt_impl(m, tau); }

}  // namespace dtnn
