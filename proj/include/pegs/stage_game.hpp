#pragma once

#include <tuple>
#include <utility>
#include <vector>

#include "pegs/game.hpp"
#include "pegs/value_function.hpp"

namespace pegs {

// One-step pursuer strategy as solved by the stage LP: joint weights over
// (successor position, alpha index into v_prev at that successor) plus the
// move marginal.
struct PursuerStageStrategy {
  std::vector<PursuerPosition> successors;   // expand_pursuer_moves order
  std::vector<std::vector<double>> weights;  // weights[i][a], sums to 1
  std::vector<double> marginal;              // marginal[i] = sum_a weights[i][a]

  double marginal_of(const PursuerPosition& pos) const;
};

struct StageSolution {
  double value = 0.0;  // gamma-scaled maximin term for a zero-caught-mass belief
  PursuerStageStrategy pursuer;
  EvaderStageStrategy evader;
  Belief transformed_belief;
};

// Pursuer side: maximize gamma * sum b(s_e) v(s_e) subject to, for every
// supported s_e and every move s_e' adjacent to it, the mixed continuation
// value at s_e' covering v(s_e). Requires b_off to carry no mass on s_p0.
std::pair<double, PursuerStageStrategy> solve_stage_pursuer(
    const Graph& graph, const PursuerPosition& s_p0, const Belief& b_off,
    const ValueFunction& v_prev, double gamma);

// Evader side (the dual): pick pi_e rows minimizing the best pursuer
// response over successor positions and their alpha vectors; also returns
// the transformed belief the LP committed to. Rows of unsupported vertices
// are fixed to uniform-over-adjacency.
std::tuple<double, EvaderStageStrategy, Belief> solve_stage_evader(
    const Graph& graph, const PursuerPosition& s_p0, const Belief& b_off,
    const ValueFunction& v_prev, double gamma);

// Both sides at once.
StageSolution solve_stage(const Graph& graph, const PursuerPosition& s_p0,
                          const Belief& b_off, const ValueFunction& v_prev,
                          double gamma);

// Full value update at an arbitrary belief: caught mass scores one
// immediately, the rest is delegated to the stage LP on the normalized
// off-position belief. All mass caught returns exactly one.
double stage_value_at(const Graph& graph, const PursuerPosition& s_p0,
                      const Belief& b, const ValueFunction& v_prev, double gamma);

}  // namespace pegs
