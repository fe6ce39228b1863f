#pragma once

#include <vector>

#include "pegs/backup.hpp"
#include "pegs/value_function.hpp"

namespace pegs {

struct SolveOptions {
  double target_eps = 1e-3;
  int max_iters = 1000;
  // Stop on the first of: gamma^t <= eps (a-priori bound) or residual <=
  // eps*(1-gamma)/gamma (Cauchy, usually sooner).
  bool use_cauchy = true;
  BackupOptions backup;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  double bound = 1.0;              // gamma^iterations
  bool exact_norm = true;          // residuals from exact extreme-point norms
  std::vector<double> residuals;   // max-norm distance per iteration
  std::vector<double> wall_ms;     // per-iteration wall time
  ValueFunction final;
  double gamma = 0.0;
};

// Horizon-0 values: one indicator alpha per reachable position.
ValueFunction horizon_zero(const GameInstance& instance);

SolveReport value_iteration(const GameInstance& instance, const SolveOptions& opts = {});

double value_at(const SolveReport& report, const PursuerPosition& position,
                const Belief& belief);

}  // namespace pegs
