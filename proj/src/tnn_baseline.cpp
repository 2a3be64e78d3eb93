#include "dtnn/tnn_baseline.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "dtnn/errors.hpp"
#include "dtnn/kernels.hpp"

namespace dtnn {
namespace {

using Clock = std::chrono::steady_clock;

// DFT path. The nuclear norms are taken on unnormalized DFT slices, so
// ||t||_F^2 = (1/n3) sum_k ||T_k||_F^2 and the per-slice threshold is n3 * tau.
// Only slices 0..n3/2 are thresholded; the rest are their conjugates, which
// keeps the inverse transform real.
Tensor3 prox_dft(const Tensor3& t, double tau, int threads, double* nuclear_out) {
  const Dims d = t.dims();
  const std::size_t n3 = d.n3;
  ComplexTensor3 ft;
  kernels::dft_tubes(to_complex(t), ft, threads);

  const std::size_t half = n3 / 2 + 1;
  std::vector<ComplexMatrix> slices(std::min(half, n3));
  for (std::size_t k = 0; k < slices.size(); ++k) slices[k] = ft.slice(k);
  const std::vector<double> norms = kernels::svt_slices(slices, static_cast<double>(n3) * tau, threads);

  double total = 0.0;
  for (std::size_t k = 0; k < n3; ++k) {
    const std::size_t partner = (n3 - k) % n3;
    if (k < slices.size()) {
      ft.slice(k) = slices[k];
      total += norms[k];
    } else {
      ft.slice(k) = slices[partner].conjugate();
      total += norms[partner];
    }
  }
  if (nuclear_out) *nuclear_out = total;

  ComplexTensor3 back;
  kernels::idft_tubes(ft, back, threads);
  return real_part_checked(back, "tnn_prox");
}

// DCT path: orthonormal, real arithmetic only, threshold tau.
Tensor3 prox_dct(const Tensor3& t, double tau, int threads, double* nuclear_out) {
  Tensor3 ft = dct_mode3(t, Direction::Forward, threads);
  std::vector<Matrix> slices(t.n3());
  for (std::size_t k = 0; k < t.n3(); ++k) slices[k] = ft.slice(k);
  const std::vector<double> norms = kernels::svt_slices(slices, tau, threads);
  double total = 0.0;
  for (std::size_t k = 0; k < t.n3(); ++k) {
    ft.slice(k) = slices[k];
    total += norms[k];
  }
  if (nuclear_out) *nuclear_out = total;
  return dct_mode3(ft, Direction::Inverse, threads);
}

}  // namespace

void BaselineConfig::validate() const {
  if (!(beta0 > 0.0) || !(beta_factor > 0.0) || !(beta_cap > 0.0)) {
    throw ArgumentError("BaselineConfig: beta0, beta_factor and beta_cap must be positive");
  }
  if (!(stop_tol > 0.0)) throw ArgumentError("BaselineConfig: stop_tol must be positive");
  if (max_iters < 1) throw ArgumentError("BaselineConfig: max_iters must be at least 1");
  if (threads < 1) throw ArgumentError("BaselineConfig: threads must be at least 1");
}

Tensor3 tnn_prox(const Tensor3& t, double tau, TransformKind kind, int threads, double* nuclear_norm_out) {
  if (!(tau >= 0.0)) throw ArgumentError("tnn_prox: threshold must be non-negative");
  return kind == TransformKind::DFT ? prox_dft(t, tau, threads, nuclear_norm_out)
                                    : prox_dct(t, tau, threads, nuclear_norm_out);
}

CompletionResult solve_tnn(const Tensor3& o, const ObservationMask& mask, const BaselineConfig& cfg) {
  cfg.validate();
  require_same_dims(o.dims(), mask.dims(), "solve_tnn");
  if (mask.count_observed() == 0) throw InvalidProblemError("solve_tnn: the mask has no observed entries");
  if (!o.all_finite()) throw NumericError("solve_tnn: observation contains non-finite entries");

  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  const Tensor3 obs = project_observed(Tensor3(o.dims()), o, mask);
  Tensor3 x = obs;
  Tensor3 multiplier(o.dims());
  double beta = cfg.beta0;

  CompletionResult result;
  result.method = cfg.transform == TransformKind::DFT ? "tnn" : "dctnn";
  IterationRecord initial;
  initial.objective = transformed_nuclear_norm(x, cfg.transform);
  initial.beta = beta;
  result.trace.push_back(initial);

  for (int k = 1; k <= cfg.max_iters; ++k) {
    Tensor3 shifted(o.dims());
    shifted.tube_matrix() = x.tube_matrix() + multiplier.tube_matrix() / beta;
    double nuclear = 0.0;
    const Tensor3 y = tnn_prox(shifted, 1.0 / beta, cfg.transform, cfg.threads, &nuclear);

    Tensor3 x_next(o.dims());
    x_next.tube_matrix() = y.tube_matrix() - multiplier.tube_matrix() / beta;
    x_next = project_observed(x_next, obs, mask);

    multiplier.tube_matrix() += beta * (x_next.tube_matrix() - y.tube_matrix());

    IterationRecord rec;
    rec.iteration = k;
    rec.beta = beta;
    rec.objective = nuclear;
    rec.rel_change_x = relative_change(x_next.tube_matrix(), x.tube_matrix());
    rec.constraint_residual = relative_change(y.tube_matrix(), x_next.tube_matrix());
    rec.wall_time_s = elapsed();
    if (!std::isfinite(rec.objective) || !x_next.all_finite()) {
      throw NumericError("solve_tnn: iterate became non-finite");
    }
    result.trace.push_back(rec);
    x = std::move(x_next);
    beta = std::min(beta * cfg.beta_factor, cfg.beta_cap);

    // Early iterates can stall at zero while the multiplier builds up, so the
    // splitting gap X - Y must be closed as well.
    if (rec.rel_change_x < cfg.stop_tol && rec.constraint_residual < cfg.stop_tol) {
      result.converged = true;
      break;
    }
  }

  result.x = std::move(x);
  result.wall_time_s = elapsed();
  return result;
}

}  // namespace dtnn
