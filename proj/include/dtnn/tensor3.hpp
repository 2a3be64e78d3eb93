#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dtnn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Extents of a third-order array, (n1, n2, n3).
struct Dims {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t n3 = 0;

  std::size_t tubes() const { return n1 * n2; }
  std::size_t size() const { return n1 * n2 * n3; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Dense real n1 x n2 x n3 tensor.
///
/// Storage is offset(i,j,k) = i + j*n1 + k*n1*n2, so every frontal slice is a
/// column-major n1 x n2 matrix and the whole buffer, viewed as a column-major
/// (n1*n2) x n3 matrix, is the transpose of the mode-3 unfolding. The solvers
/// work on that "tube matrix" view directly.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(Dims dims, double fill = 0.0);
  Tensor3(Dims dims, std::vector<double> data);

  static Tensor3 zeros(Dims dims) { return Tensor3(dims); }

  const Dims& dims() const { return dims_; }
  std::size_t n1() const { return dims_.n1; }
  std::size_t n2() const { return dims_.n2; }
  std::size_t n3() const { return dims_.n3; }
  std::size_t size() const { return data_.size(); }

  std::size_t offset(std::size_t i, std::size_t j, std::size_t k) const {
    return i + dims_.n1 * (j + dims_.n2 * k);
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[offset(i, j, k)]; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const { return data_[offset(i, j, k)]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  using MatrixMap = Eigen::Map<Matrix>;
  using ConstMatrixMap = Eigen::Map<const Matrix>;

  /// Frontal slice k as an n1 x n2 matrix view.
  MatrixMap slice(std::size_t k);
  ConstMatrixMap slice(std::size_t k) const;

  /// (n1*n2) x n3 view whose row q = i + j*n1 is the tube (i, j, :).
  MatrixMap tube_matrix();
  ConstMatrixMap tube_matrix() const;

  bool all_finite() const;

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  Dims dims_{};
  std::vector<double> data_;
};

/// Boolean tensor marking observed entries (the set Omega).
class ObservationMask {
 public:
  ObservationMask() = default;
  explicit ObservationMask(Dims dims, bool fill = false);
  ObservationMask(Dims dims, std::vector<unsigned char> flags);

  const Dims& dims() const { return dims_; }
  std::size_t size() const { return flags_.size(); }

  bool operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return flags_[i + dims_.n1 * (j + dims_.n2 * k)] != 0;
  }
  bool at(std::size_t offset) const { return flags_[offset] != 0; }
  void set(std::size_t offset, bool value) { flags_[offset] = value ? 1 : 0; }
  void set(std::size_t i, std::size_t j, std::size_t k, bool value) {
    set(i + dims_.n1 * (j + dims_.n2 * k), value);
  }

  std::span<const unsigned char> flags() const { return flags_; }
  std::size_t count_observed() const;

  friend bool operator==(const ObservationMask&, const ObservationMask&) = default;

 private:
  Dims dims_{};
  std::vector<unsigned char> flags_;
};

/// Complex tensor with the Tensor3 layout; holds transform-domain data.
class ComplexTensor3 {
 public:
  using value_type = std::complex<double>;
  using MatrixMap = Eigen::Map<Eigen::MatrixXcd>;
  using ConstMatrixMap = Eigen::Map<const Eigen::MatrixXcd>;

  ComplexTensor3() = default;
  explicit ComplexTensor3(Dims dims) : dims_(dims), data_(dims.size()) {}

  const Dims& dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }

  value_type& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[i + dims_.n1 * (j + dims_.n2 * k)];
  }
  value_type operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[i + dims_.n1 * (j + dims_.n2 * k)];
  }

  std::span<value_type> data() { return data_; }
  std::span<const value_type> data() const { return data_; }

  MatrixMap slice(std::size_t k) {
    return MatrixMap(data_.data() + k * dims_.tubes(), static_cast<Eigen::Index>(dims_.n1),
                     static_cast<Eigen::Index>(dims_.n2));
  }
  ConstMatrixMap slice(std::size_t k) const {
    return ConstMatrixMap(data_.data() + k * dims_.tubes(), static_cast<Eigen::Index>(dims_.n1),
                          static_cast<Eigen::Index>(dims_.n2));
  }

 private:
  Dims dims_{};
  std::vector<value_type> data_;
};

/// Mode-3 unfolding: n3 x (n1*n2), column q = i + j*n1 holds tube (i, j, :).
Matrix unfold3(const Tensor3& t);

/// Inverse of unfold3. Throws ShapeError if `m` is not n3 x (n1*n2).
Tensor3 fold3(const Matrix& m, Dims dims);

/// t x_3 a, i.e. fold3(a * unfold3(t)). `a` must have n3 columns.
Tensor3 mode3_product(const Tensor3& t, const Matrix& a);

double frobenius_norm(const Tensor3& t);

/// o on observed entries, x elsewhere.
Tensor3 project_observed(const Tensor3& x, const Tensor3& o, const ObservationMask& mask);

void require_same_dims(const Dims& a, const Dims& b, const char* what);

}  // namespace dtnn
