#include "dtnn/dictionary.hpp"

#include <cmath>
#include <string>

#include "dtnn/completion.hpp"
#include "dtnn/errors.hpp"

namespace dtnn {
namespace {

void require_unit(const Eigen::Ref<const Vector>& atom, std::size_t i) {
  const double norm = atom.norm();
  if (!(std::abs(norm - 1.0) <= kUnitNormTol)) {
    throw ArgumentError("Dictionary: atom " + std::to_string(i) + " has norm " + std::to_string(norm));
  }
}

}  // namespace

Dictionary::Dictionary(Matrix unit_atoms) : atoms_(std::move(unit_atoms)) {
  for (Eigen::Index c = 0; c < atoms_.cols(); ++c) require_unit(atoms_.col(c), static_cast<std::size_t>(c));
}

Dictionary Dictionary::from_columns(Matrix columns) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    const double norm = columns.col(c).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw ArgumentError("Dictionary: column " + std::to_string(c) + " cannot be normalized");
    }
    columns.col(c) /= norm;
  }
  return Dictionary(std::move(columns));
}

void Dictionary::set_atom(std::size_t i, const Vector& unit_atom) {
  if (static_cast<Eigen::Index>(i) >= atoms_.cols() || unit_atom.size() != atoms_.rows()) {
    throw ShapeError("Dictionary::set_atom: index or length out of range");
  }
  require_unit(unit_atom, i);
  atoms_.col(static_cast<Eigen::Index>(i)) = unit_atom;
}

double relative_change(const Eigen::Ref<const Matrix>& now, const Eigen::Ref<const Matrix>& before) {
  const double diff = (now - before).norm();
  const double base = before.norm();
  if (base == 0.0) return diff == 0.0 ? 0.0 : 1.0;
  return diff / base;
}

}  // namespace dtnn
