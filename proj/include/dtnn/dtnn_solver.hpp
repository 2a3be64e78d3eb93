#pragma once

// Dictionary-learned tensor completion.
//
// Model: minimize  sum_i ||Z^i||_*  subject to  X = Z x_3 D,  X_Omega = O_Omega,
// ||D(:, i)|| = 1, relaxed by a quadratic penalty
//
//   L(Z, D, X) = beta/2 ||X - Z x_3 D||_F^2 + sum_i ||Z^i||_*
//
// and solved by proximal alternating minimization: per outer iteration, for
// each atom i the coefficient slice Z^i (singular value thresholding) and
// then the atom d^i (normalized closed form) are updated against the residual
// R^i that excludes atom i; finally X is updated and re-projected onto the
// observations. beta grows on a fixed schedule.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dtnn/completion.hpp"
#include "dtnn/dictionary.hpp"
#include "dtnn/rng.hpp"
#include "dtnn/tensor3.hpp"

namespace dtnn {

struct SolverConfig {
  std::optional<std::size_t> atoms;  // d; defaults to 5 * n3
  double beta = 10.0;
  double rho_z = 20.0;
  double rho_d = 1.0;
  double rho_x = 1.0;
  std::vector<int> beta_boost_iters{15, 20, 25};
  double beta_boost_factor = 1.5;
  int beta_growth_start = 30;
  double beta_growth_factor = 1.2;
  double beta_cap = 1e8;
  double stop_tol = 1e-3;
  int max_iters = 200;
  int warmup_iters = 10;
  int residual_refresh_iters = 10;
  std::uint64_t seed = 0;
  int threads = 1;

  std::size_t resolved_atoms(std::size_t n3) const { return atoms.value_or(5 * n3); }
  /// Throws ArgumentError on any out-of-range field.
  void validate() const;
};

/// beta for 1-based outer iteration `iteration`, given the previous value.
double scheduled_beta(int iteration, double previous, const SolverConfig& cfg);

/// Fills missing entries by linear interpolation along each tube; tube ends
/// take the nearest observed value and fully missing tubes the global
/// observed mean. Throws InvalidProblemError if nothing is observed.
Tensor3 linear_interpolate_init(const Tensor3& o, const ObservationMask& mask);

/// The d tubes of x0 with the most observed entries (ties: lower tube index),
/// each normalized. Zero tubes are replaced by normalized Gaussian draws.
Dictionary init_dictionary(const Tensor3& x0, const ObservationMask& mask, std::size_t d, Rng& rng);

struct WarmStart {
  Tensor3 z;
  Dictionary dict;
  std::vector<double> objective;  // before the first pass, then after each pass
};

/// Random coefficients N(0, 1)/sqrt(n3) from cfg.seed, refined by
/// cfg.warmup_iters coefficient/atom sweeps with X fixed at x0.
WarmStart warmup_coefficients(const Tensor3& x0, const Dictionary& d0, const SolverConfig& cfg);

/// R^i = unfold3(x) - sum_{j != i} d^j (z^j)^T, an n3 x (n1*n2) matrix. The
/// caller supplies atoms j < i already advanced to the current sweep.
Matrix residual(std::size_t i, const Tensor3& x, const Dictionary& dict, const Tensor3& z);

/// SVT_{1/(beta+rho_z)} of (rho_z * z_prev + beta * vec^-1(r^T d)) / (beta + rho_z).
Matrix update_slice_z(const Matrix& r, const Vector& atom, const Matrix& z_prev, double beta, double rho_z);

struct AtomUpdate {
  Vector atom;
  bool degenerate = false;  // zero numerator: previous atom kept
};

/// (beta * r * vec(z_new) + rho_d * d_prev) normalized.
AtomUpdate update_atom_d(const Matrix& r, const Matrix& z_new, const Vector& d_prev, double beta, double rho_d);

/// X half-step (beta * Z x_3 D + rho_x * x_prev) / (beta + rho_x), then
/// the observed entries are restored from o.
Tensor3 update_x(const Tensor3& z, const Dictionary& dict, const Tensor3& x_prev, const Tensor3& o,
                 const ObservationMask& mask, double beta, double rho_x);

/// beta/2 ||x - z x_3 D||^2 + sum_i ||z(:,:,i)||_*
double objective(const Tensor3& z, const Dictionary& dict, const Tensor3& x, double beta);

struct IterationSnapshot {
  const IterationRecord& record;
  const Tensor3& x;
  const Tensor3& z;
  const Dictionary& dict;
};
using IterationObserver = std::function<void(const IterationSnapshot&)>;

/// Full pipeline: interpolate, initialize the dictionary, warm up, iterate.
/// The observer, when set, sees the state after initialization (iteration 0)
/// and after every outer iteration.
CompletionResult solve(const Tensor3& o, const ObservationMask& mask, const SolverConfig& cfg,
                       const IterationObserver& observer = {});

}  // namespace dtnn
