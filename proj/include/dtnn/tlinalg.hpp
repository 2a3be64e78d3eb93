#pragma once

#include <complex>

#include <Eigen/Dense>

#include "dtnn/tensor3.hpp"

namespace dtnn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Relative cutoff below which a singular value counts as zero for rank.
inline constexpr double kRankCutoff = 1e-12;

/// Thin SVD, m = u * diag(s) * v^H with s sorted descending.
template <typename Scalar>
struct SvdFactors {
  using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  MatrixType u;  // m x r
  Vector s;      // r = min(m, n)
  MatrixType v;  // n x r

  MatrixType reconstruct() const { return u * s.asDiagonal() * v.adjoint(); }
};

/// Throws NumericError on non-finite input.
SvdFactors<double> svd(const Matrix& m);
SvdFactors<Complex> svd(const ComplexMatrix& m);

double nuclear_norm(const Matrix& m);
double nuclear_norm(const ComplexMatrix& m);

/// Number of singular values above kRankCutoff * s_max.
std::size_t numerical_rank(const Vector& singular_values);
std::size_t numerical_rank(const Vector& singular_values, double reference_max);

/// Proximal operator of tau*||.||_*: u * max(s - tau, 0) * v^H.
/// Throws ArgumentError for tau < 0.
Matrix svt(const Matrix& m, double tau);
ComplexMatrix svt(const ComplexMatrix& m, double tau);

/// svt() that also reports the nuclear norm of its output, sum(max(s - tau, 0)).
template <typename Scalar>
struct ThresholdedMatrix {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> value;
  double nuclear_norm = 0.0;
};
ThresholdedMatrix<double> svt_with_norm(const Matrix& m, double tau);
ThresholdedMatrix<Complex> svt_with_norm(const ComplexMatrix& m, double tau);

}  // namespace dtnn
