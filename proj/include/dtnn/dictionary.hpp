#pragma once

#include <cstddef>

#include "dtnn/tensor3.hpp"

namespace dtnn {

/// Tolerance on | ||atom|| - 1 | for every dictionary column.
inline constexpr double kUnitNormTol = 1e-10;

/// n3 x d matrix of unit-norm atoms.
class Dictionary {
 public:
  Dictionary() = default;
  /// Throws ArgumentError unless every column has unit norm within kUnitNormTol.
  explicit Dictionary(Matrix unit_atoms);

  /// Scales each column to unit norm. Throws ArgumentError on a zero column.
  static Dictionary from_columns(Matrix columns);

  const Matrix& atoms() const { return atoms_; }
  std::size_t depth() const { return static_cast<std::size_t>(atoms_.rows()); }
  std::size_t atom_count() const { return static_cast<std::size_t>(atoms_.cols()); }
  auto atom(std::size_t i) const { return atoms_.col(static_cast<Eigen::Index>(i)); }

  /// Replaces atom i. Throws ArgumentError if `unit_atom` is not unit norm.
  void set_atom(std::size_t i, const Vector& unit_atom);

  friend bool operator==(const Dictionary& a, const Dictionary& b) { return a.atoms_ == b.atoms_; }

 private:
  Matrix atoms_;
};

}  // namespace dtnn
