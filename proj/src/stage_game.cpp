#include "pegs/stage_game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pegs/lp.hpp"

namespace pegs {

namespace {

constexpr double kMassCutoff = 1e-12;  // constraints only for supported vertices
constexpr double kWeightClamp = -1e-10;

// Successor positions with their alpha sets; shared LP preamble.
struct StageContext {
  std::vector<PursuerPosition> successors;
  std::vector<const AlphaSet*> alpha_sets;
  std::vector<int> support;  // vertices with b_off above the cutoff
};

StageContext make_context(const Graph& graph, const PursuerPosition& s_p0,
                          const Belief& b_off, const ValueFunction& v_prev) {
  if (b_off.mass_on(s_p0) > 1e-9) {
    throw std::invalid_argument("stage game: belief carries mass on the pursuer position");
  }
  StageContext ctx;
  ctx.successors = expand_pursuer_moves(graph, s_p0);
  for (const auto& succ : ctx.successors) {
    if (!v_prev.contains(succ)) {
      std::ostringstream os;
      os << "stage game: previous value function misses successor " << succ.to_string();
      throw std::logic_error(os.str());
    }
    ctx.alpha_sets.push_back(&v_prev.at(succ));
  }
  for (int v = 0; v < graph.vertex_count(); ++v) {
    if (!s_p0.contains(v) && b_off[v] > kMassCutoff) ctx.support.push_back(v);
  }
  if (ctx.support.empty()) {
    throw std::invalid_argument("stage game: belief has no supported off vertex");
  }
  return ctx;
}

}  // namespace

double PursuerStageStrategy::marginal_of(const PursuerPosition& pos) const {
  for (size_t i = 0; i < successors.size(); ++i) {
    if (successors[i] == pos) return marginal[i];
  }
  return 0.0;
}

std::pair<double, PursuerStageStrategy> solve_stage_pursuer(
    const Graph& graph, const PursuerPosition& s_p0, const Belief& b_off,
    const ValueFunction& v_prev, double gamma) {
  StageContext ctx = make_context(graph, s_p0, b_off, v_prev);

  lp::LinearProgram p(lp::Sense::kMaximize);
  std::vector<std::vector<int>> pi_var(ctx.successors.size());
  for (size_t i = 0; i < ctx.successors.size(); ++i) {
    pi_var[i].resize(ctx.alpha_sets[i]->size());
    for (size_t a = 0; a < ctx.alpha_sets[i]->size(); ++a) {
      pi_var[i][a] = p.add_variable(0.0);
    }
  }
  std::vector<int> v_var(graph.vertex_count(), -1);
  for (int s_e : ctx.support) {
    v_var[s_e] = p.add_variable(gamma * b_off[s_e], -lp::kInfinity);
  }

  for (int s_e : ctx.support) {
    for (int s_e1 : graph.neighbors(s_e)) {
      int row = p.add_row(lp::RowType::kGe, 0.0);
      for (size_t i = 0; i < ctx.successors.size(); ++i) {
        for (size_t a = 0; a < ctx.alpha_sets[i]->size(); ++a) {
          p.set_coeff(row, pi_var[i][a], (*ctx.alpha_sets[i])[a].values[s_e1]);
        }
      }
      p.set_coeff(row, v_var[s_e], -1.0);
    }
  }
  int norm = p.add_row(lp::RowType::kEq, 1.0);
  for (const auto& vars : pi_var) {
    for (int var : vars) p.set_coeff(norm, var, 1.0);
  }

  auto sol = lp::solve(p);
  if (sol.status != lp::Status::kOptimal) {
    throw std::runtime_error("stage game: pursuer LP did not reach an optimum");
  }

  PursuerStageStrategy strat;
  strat.successors = std::move(ctx.successors);
  strat.weights.resize(strat.successors.size());
  strat.marginal.assign(strat.successors.size(), 0.0);
  for (size_t i = 0; i < strat.successors.size(); ++i) {
    strat.weights[i].resize(pi_var[i].size());
    for (size_t a = 0; a < pi_var[i].size(); ++a) {
      double w = sol.primal[pi_var[i][a]];
      if (w < 0.0) {
        if (w < kWeightClamp) {
          throw std::runtime_error("stage game: pursuer LP returned a negative weight");
        }
        w = 0.0;
      }
      strat.weights[i][a] = w;
      strat.marginal[i] += w;
    }
  }
  return {sol.objective, std::move(strat)};
}

std::tuple<double, EvaderStageStrategy, Belief> solve_stage_evader(
    const Graph& graph, const PursuerPosition& s_p0, const Belief& b_off,
    const ValueFunction& v_prev, double gamma) {
  StageContext ctx = make_context(graph, s_p0, b_off, v_prev);
  const int n = graph.vertex_count();

  lp::LinearProgram p(lp::Sense::kMinimize);
  const int value_var = p.add_variable(1.0, -lp::kInfinity);
  std::vector<int> belief_var(n);
  for (int v = 0; v < n; ++v) belief_var[v] = p.add_variable(0.0);

  // pi_e(s_e, s_e') only for supported rows; the rest never touch the
  // objective and are fixed to uniform afterwards.
  std::vector<std::vector<int>> pe_var(n);
  for (int s_e : ctx.support) {
    pe_var[s_e].resize(graph.neighbors(s_e).size());
    for (size_t j = 0; j < pe_var[s_e].size(); ++j) pe_var[s_e][j] = p.add_variable(0.0);
  }

  for (size_t i = 0; i < ctx.successors.size(); ++i) {
    for (const AlphaVector& alpha : *ctx.alpha_sets[i]) {
      int row = p.add_row(lp::RowType::kLe, 0.0);
      for (int v = 0; v < n; ++v) p.set_coeff(row, belief_var[v], gamma * alpha.values[v]);
      p.set_coeff(row, value_var, -1.0);
    }
  }
  for (int v = 0; v < n; ++v) {
    int row = p.add_row(lp::RowType::kEq, 0.0);
    p.set_coeff(row, belief_var[v], -1.0);
    for (int s_e : ctx.support) {
      const auto& nb = graph.neighbors(s_e);
      for (size_t j = 0; j < nb.size(); ++j) {
        if (nb[j] == v) p.set_coeff(row, pe_var[s_e][j], b_off[s_e]);
      }
    }
  }
  for (int s_e : ctx.support) {
    int row = p.add_row(lp::RowType::kEq, 1.0);
    for (int var : pe_var[s_e]) p.set_coeff(row, var, 1.0);
  }

  auto sol = lp::solve(p);
  if (sol.status != lp::Status::kOptimal) {
    throw std::runtime_error("stage game: evader LP did not reach an optimum");
  }

  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (int s_e = 0; s_e < n; ++s_e) {
    const auto& nb = graph.neighbors(s_e);
    if (!pe_var[s_e].empty()) {
      double total = 0.0;
      for (size_t j = 0; j < nb.size(); ++j) {
        double w = std::max(0.0, sol.primal[pe_var[s_e][j]]);
        rows[s_e][nb[j]] += w;
        total += w;
      }
      for (double& x : rows[s_e]) x /= total;
    } else {
      for (int v : nb) rows[s_e][v] = 1.0 / static_cast<double>(nb.size());
    }
  }
  EvaderStageStrategy evader(graph, std::move(rows));

  std::vector<double> transformed(n);
  for (int v = 0; v < n; ++v) transformed[v] = std::max(0.0, sol.primal[belief_var[v]]);
  return {sol.objective, std::move(evader), Belief(std::move(transformed))};
}

StageSolution solve_stage(const Graph& graph, const PursuerPosition& s_p0,
                          const Belief& b_off, const ValueFunction& v_prev,
                          double gamma) {
  auto [pv, pursuer] = solve_stage_pursuer(graph, s_p0, b_off, v_prev, gamma);
  auto [ev, evader, transformed] = solve_stage_evader(graph, s_p0, b_off, v_prev, gamma);
  (void)ev;
  return StageSolution{pv, std::move(pursuer), std::move(evader), std::move(transformed)};
}

double stage_value_at(const Graph& graph, const PursuerPosition& s_p0,
                      const Belief& b, const ValueFunction& v_prev, double gamma) {
  const double caught = b.mass_on(s_p0);
  const double off = 1.0 - caught;
  if (off <= kMassCutoff) return 1.0;

  std::vector<double> mass(b.mass());
  for (int v = 0; v < b.size(); ++v) {
    mass[v] = s_p0.contains(v) ? 0.0 : mass[v] / off;
  }
  auto [value, strat] = solve_stage_pursuer(graph, s_p0, Belief(std::move(mass)), v_prev, gamma);
  (void)strat;
  return caught + off * value;
}

}  // namespace pegs
