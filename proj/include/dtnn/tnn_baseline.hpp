#pragma once

#include "dtnn/completion.hpp"
#include "dtnn/spectral.hpp"
#include "dtnn/tensor3.hpp"

namespace dtnn {

struct BaselineConfig {
  TransformKind transform = TransformKind::DFT;
  double beta0 = 1e-2;
  double beta_factor = 1.2;
  double beta_cap = 1e8;
  double stop_tol = 1e-4;  // relative change of x
  int max_iters = 500;
  int threads = 1;

  void validate() const;
};

/// Transform-domain nuclear norm minimization subject to X_Omega = O_Omega,
/// solved by two-block splitting with a scaled multiplier:
///
///   Y      <- slice-wise SVT of (X + L/beta) in the transform domain
///   X      <- (Y - L/beta) off Omega, O on Omega
///   L      <- L + beta (X - Y)
///   beta   <- min(beta * factor, cap)
///
/// The multiplier starts at zero and X at the observation (zeros off Omega).
/// Trace objective is the transform-domain nuclear norm of Y. Stops once both
/// the relative change of X and ||Y - X|| / ||X|| fall below stop_tol.
CompletionResult solve_tnn(const Tensor3& o, const ObservationMask& mask, const BaselineConfig& cfg);

/// Proximal map of tau * TNN (or its DCT analogue) in the original domain.
Tensor3 tnn_prox(const Tensor3& t, double tau, TransformKind kind, int threads = 1,
                 double* nuclear_norm_out = nullptr);

}  // namespace dtnn
