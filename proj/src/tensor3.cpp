#include "dtnn/tensor3.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "dtnn/errors.hpp"

namespace dtnn {
namespace {

std::string dims_str(const Dims& d) {
  std::ostringstream os;
  os << d.n1 << "x" << d.n2 << "x" << d.n3;
  return os.str();
}

}  // namespace

void require_same_dims(const Dims& a, const Dims& b, const char* what) {
  if (!(a == b)) {
    throw ShapeError(std::string(what) + ": dimension mismatch " + dims_str(a) + " vs " + dims_str(b));
  }
}

Tensor3::Tensor3(Dims dims, double fill) : dims_(dims), data_(dims.size(), fill) {}

Tensor3::Tensor3(Dims dims, std::vector<double> data) : dims_(dims), data_(std::move(data)) {
  if (data_.size() != dims_.size()) {
    throw ShapeError("Tensor3: data length " + std::to_string(data_.size()) + " does not match " +
                     dims_str(dims_));
  }
}

Tensor3::MatrixMap Tensor3::slice(std::size_t k) {
  return MatrixMap(data_.data() + k * dims_.tubes(), static_cast<Eigen::Index>(dims_.n1),
                   static_cast<Eigen::Index>(dims_.n2));
}

Tensor3::ConstMatrixMap Tensor3::slice(std::size_t k) const {
  return ConstMatrixMap(data_.data() + k * dims_.tubes(), static_cast<Eigen::Index>(dims_.n1),
                        static_cast<Eigen::Index>(dims_.n2));
}

Tensor3::MatrixMap Tensor3::tube_matrix() {
  return MatrixMap(data_.data(), static_cast<Eigen::Index>(dims_.tubes()),
                   static_cast<Eigen::Index>(dims_.n3));
}

Tensor3::ConstMatrixMap Tensor3::tube_matrix() const {
  return ConstMatrixMap(data_.data(), static_cast<Eigen::Index>(dims_.tubes()),
                        static_cast<Eigen::Index>(dims_.n3));
}

bool Tensor3::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

ObservationMask::ObservationMask(Dims dims, bool fill) : dims_(dims), flags_(dims.size(), fill ? 1 : 0) {}

ObservationMask::ObservationMask(Dims dims, std::vector<unsigned char> flags)
    : dims_(dims), flags_(std::move(flags)) {
  if (flags_.size() != dims_.size()) {
    throw ShapeError("ObservationMask: flag count " + std::to_string(flags_.size()) +
                     " does not match " + dims_str(dims_));
  }
  for (auto& f : flags_) f = f ? 1 : 0;
}

std::size_t ObservationMask::count_observed() const {
  return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), 1));
}

Matrix unfold3(const Tensor3& t) { return t.tube_matrix().transpose(); }

Tensor3 fold3(const Matrix& m, Dims dims) {
  if (static_cast<std::size_t>(m.rows()) != dims.n3 || static_cast<std::size_t>(m.cols()) != dims.tubes()) {
    throw ShapeError("fold3: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     ", expected " + std::to_string(dims.n3) + "x" + std::to_string(dims.tubes()));
  }
  Tensor3 out(dims);
  out.tube_matrix() = m.transpose();
  return out;
}

Tensor3 mode3_product(const Tensor3& t, const Matrix& a) {
  if (static_cast<std::size_t>(a.cols()) != t.n3()) {
    throw ShapeError("mode3_product: matrix has " + std::to_string(a.cols()) + " columns, tensor depth is " +
                     std::to_string(t.n3()));
  }
  Tensor3 out(Dims{t.n1(), t.n2(), static_cast<std::size_t>(a.rows())});
  out.tube_matrix().noalias() = t.tube_matrix() * a.transpose();
  return out;
}

double frobenius_norm(const Tensor3& t) {
  return Eigen::Map<const Vector>(t.data().data(), static_cast<Eigen::Index>(t.size())).norm();
}

Tensor3 project_observed(const Tensor3& x, const Tensor3& o, const ObservationMask& mask) {
  require_same_dims(x.dims(), o.dims(), "project_observed");
  require_same_dims(x.dims(), mask.dims(), "project_observed");
  Tensor3 out = x;
  auto dst = out.data();
  auto src = o.data();
  for (std::size_t p = 0; p < dst.size(); ++p) {
    if (mask.at(p)) dst[p] = src[p];
  }
  return out;
}

}  // namespace dtnn
