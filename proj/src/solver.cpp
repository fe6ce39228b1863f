#include "pegs/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace pegs {

ValueFunction horizon_zero(const GameInstance& instance) {
  ValueFunction vf;
  for (const auto& pos : reachable_positions(instance.graph, instance.initial_position)) {
    std::vector<double> a(instance.graph.vertex_count(), 0.0);
    for (int v : pos.vertices()) a[v] = 1.0;
    vf.set(pos, {AlphaVector{std::move(a)}});
  }
  return vf;
}

SolveReport value_iteration(const GameInstance& instance, const SolveOptions& opts) {
  if (opts.target_eps <= 0.0) {
    throw std::invalid_argument("value_iteration: target_eps must be positive");
  }
  SolveReport report;
  report.gamma = instance.gamma;
  report.final = horizon_zero(instance);

  double bound = 1.0;
  for (int t = 1; t <= opts.max_iters; ++t) {
    const auto start = std::chrono::steady_clock::now();
    ValueFunction next = apply_H(report.final, instance, opts.backup);
    MaxNormResult residual = max_norm_distance(next, report.final, opts.backup.extreme);
    const auto stop = std::chrono::steady_clock::now();

    report.final = std::move(next);
    report.iterations = t;
    report.residuals.push_back(residual.distance);
    report.exact_norm = report.exact_norm && residual.exact;
    report.wall_ms.push_back(
        std::chrono::duration<double, std::milli>(stop - start).count());
    bound *= instance.gamma;
    report.bound = bound;

    if (bound <= opts.target_eps) {
      report.converged = true;
      break;
    }
    if (opts.use_cauchy && instance.gamma > 0.0 &&
        residual.distance <=
            opts.target_eps * (1.0 - instance.gamma) / instance.gamma) {
      report.converged = true;
      break;
    }
  }
  return report;
}

double value_at(const SolveReport& report, const PursuerPosition& position,
                const Belief& belief) {
  return evaluate(report.final.at(position), belief);
}

}  // namespace pegs
