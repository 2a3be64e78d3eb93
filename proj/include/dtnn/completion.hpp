#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dtnn/dictionary.hpp"
#include "dtnn/tensor3.hpp"

namespace dtnn {

/// One outer iteration of a completion solver. Iteration 0 is the state
/// after initialization.
struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;
  double beta = 0.0;
  double rel_change_z = 0.0;
  double rel_change_d = 0.0;
  double rel_change_x = 0.0;
  double constraint_residual = 0.0;  // ||Y - X|| / ||X|| for splitting baselines
  double wall_time_s = 0.0;
  int degenerate_atoms = 0;  // atom updates that kept the previous atom
};

struct CompletionResult {
  std::string method;
  Tensor3 x;                        // recovered tensor, equal to the observation on Omega
  Tensor3 z;                        // coefficients (n1 x n2 x d); empty for transform baselines
  std::optional<Dictionary> dict;   // learned dictionary; empty for transform baselines
  std::vector<IterationRecord> trace;
  bool converged = false;
  double wall_time_s = 0.0;

  int iterations() const { return trace.empty() ? 0 : trace.back().iteration; }
};

/// ||now - before|| / ||before||, or 0/1 when ||before|| == 0.
double relative_change(const Eigen::Ref<const Matrix>& now, const Eigen::Ref<const Matrix>& before);

}  // namespace dtnn
