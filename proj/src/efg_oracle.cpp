#include "pegs/efg_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pegs/lp.hpp"

namespace pegs {

Efg::Efg(const GameInstance& instance, int horizon, std::vector<int> chance_support,
         const EfgOptions& opts)
    : graph_(instance.graph),
      gamma_(instance.gamma),
      horizon_(horizon),
      node_cap_(opts.node_cap) {
  if (horizon < 1) throw std::invalid_argument("efg: horizon must be at least 1");
  if (chance_support.empty()) throw std::invalid_argument("efg: empty chance support");

  pseq_parent_.push_back(-1);
  pseq_position_.push_back(instance.initial_position);
  pseq_acting_.push_back(0);
  pseq_children_.emplace_back();

  eseq_infoset_.push_back(-1);
  infosets_of_seq_.emplace_back();

  std::sort(chance_support.begin(), chance_support.end());
  for (int v0 : chance_support) {
    ++nodes_;
    if (instance.initial_position.contains(v0)) {
      payoffs_.push_back({0, 0, v0, 1.0});  // caught at placement
    } else {
      expand(v0, 0, 0, v0, 0);
    }
  }
}

void Efg::expand(int chance_vertex, int pseq, int eseq, int evader_vertex, int round) {
  if (!pseq_acting_[pseq]) {
    pseq_acting_[pseq] = 1;
    for (const auto& next : expand_pursuer_moves(graph_, pseq_position_[pseq])) {
      pseq_children_[pseq].push_back(static_cast<int>(pseq_parent_.size()));
      pseq_parent_.push_back(pseq);
      pseq_position_.push_back(next);
      pseq_acting_.push_back(0);
      pseq_children_.emplace_back();
    }
  }
  // Copies: the sequence vectors grow inside the recursion below and would
  // invalidate references into them.
  const std::vector<int> moves = pseq_children_[pseq];
  const auto& actions = graph_.neighbors(evader_vertex);

  const int infoset = static_cast<int>(einfo_parent_seq_.size());
  einfo_parent_seq_.push_back(eseq);
  einfo_members_.push_back(static_cast<int>(moves.size()));
  einfo_action_seqs_.emplace_back();
  infosets_of_seq_[eseq].push_back(infoset);
  for (size_t a = 0; a < actions.size(); ++a) {
    einfo_action_seqs_[infoset].push_back(static_cast<int>(eseq_infoset_.size()));
    eseq_infoset_.push_back(infoset);
    infosets_of_seq_.emplace_back();
  }

  nodes_ += static_cast<std::int64_t>(moves.size()) * (1 + actions.size());
  if (nodes_ > node_cap_) {
    std::ostringstream os;
    os << "efg: tree exceeds the node cap of " << node_cap_;
    throw std::runtime_error(os.str());
  }

  for (int child : moves) {
    const PursuerPosition s_p1 = pseq_position_[child];
    for (size_t a = 0; a < actions.size(); ++a) {
      const int s_e1 = actions[a];
      const int next_eseq = einfo_action_seqs_[infoset][a];
      if (s_p1.contains(s_e1)) {
        payoffs_.push_back({child, next_eseq, chance_vertex,
                            std::pow(gamma_, round + 1)});
      } else if (round + 1 < horizon_) {
        expand(chance_vertex, child, next_eseq, s_e1, round + 1);
      }
    }
  }
}

int Efg::pursuer_infoset_count() const {
  int count = 0;
  for (char acting : pseq_acting_) count += acting;
  return count;
}

Efg::Solution Efg::solve(const Belief& b0) const {
  lp::LinearProgram p(lp::Sense::kMaximize);

  std::vector<int> x(pseq_parent_.size());
  for (size_t s = 0; s < x.size(); ++s) x[s] = p.add_variable(0.0);
  const int q_root = p.add_variable(1.0, -lp::kInfinity);
  std::vector<int> q(einfo_parent_seq_.size());
  for (size_t i = 0; i < q.size(); ++i) q[i] = p.add_variable(0.0, -lp::kInfinity);

  // Pursuer realization-plan flow.
  int root_row = p.add_row(lp::RowType::kEq, 1.0);
  p.set_coeff(root_row, x[0], 1.0);
  for (size_t s = 0; s < x.size(); ++s) {
    if (!pseq_acting_[s]) continue;
    int row = p.add_row(lp::RowType::kEq, 0.0);
    p.set_coeff(row, x[s], -1.0);
    for (int child : pseq_children_[s]) p.set_coeff(row, x[child], 1.0);
  }

  // One best-response constraint per evader sequence.
  std::vector<int> rows(eseq_infoset_.size());
  for (size_t e = 0; e < eseq_infoset_.size(); ++e) {
    rows[e] = p.add_row(lp::RowType::kLe, 0.0);
    const int owner = eseq_infoset_[e];
    p.set_coeff(rows[e], owner < 0 ? q_root : q[owner], 1.0);
    for (int infoset : infosets_of_seq_[e]) p.set_coeff(rows[e], q[infoset], -1.0);
  }
  for (const Payoff& entry : payoffs_) {
    const double weight = b0[entry.chance_vertex] * entry.utility;
    if (weight != 0.0) p.set_coeff(rows[entry.eseq], x[entry.pseq], -weight);
  }

  auto sol = lp::solve(p);
  if (sol.status != lp::Status::kOptimal) {
    throw std::runtime_error(
        std::string("efg: sequence-form LP reported ") +
        (sol.status == lp::Status::kInfeasible ? "infeasible" : "unbounded"));
  }
  Solution out;
  out.value = sol.objective;
  out.plan.resize(x.size());
  for (size_t s = 0; s < x.size(); ++s) out.plan[s] = std::max(0.0, sol.primal[x[s]]);
  return out;
}

double Efg::best_response_value(const std::vector<double>& plan, const Belief& b0) const {
  if (plan.size() != pseq_parent_.size()) {
    throw std::invalid_argument("efg: plan length does not match the sequence count");
  }
  // Payoff mass reaching each evader sequence under the fixed plan.
  std::vector<double> seq_value(eseq_infoset_.size(), 0.0);
  for (const Payoff& entry : payoffs_) {
    seq_value[entry.eseq] += b0[entry.chance_vertex] * entry.utility * plan[entry.pseq];
  }
  // Information sets were created parents-first; sweep children first.
  std::vector<double> infoset_value(einfo_parent_seq_.size(), 0.0);
  for (int i = static_cast<int>(einfo_parent_seq_.size()) - 1; i >= 0; --i) {
    double best = std::numeric_limits<double>::infinity();
    for (int seq : einfo_action_seqs_[i]) {
      double total = seq_value[seq];
      for (int child : infosets_of_seq_[seq]) total += infoset_value[child];
      best = std::min(best, total);
    }
    infoset_value[i] = best;
  }
  double root = seq_value[0];
  for (int infoset : infosets_of_seq_[0]) root += infoset_value[infoset];
  return root;
}

Efg build_efg(const GameInstance& instance, int horizon, const EfgOptions& opts) {
  std::vector<int> support;
  for (int v = 0; v < instance.graph.vertex_count(); ++v) {
    if (instance.initial_belief[v] > 0.0) support.push_back(v);
  }
  return Efg(instance, horizon, std::move(support), opts);
}

double oracle_value(const GameInstance& instance, int horizon, const Belief& b0,
                    const EfgOptions& opts) {
  std::vector<int> support;
  for (int v = 0; v < instance.graph.vertex_count(); ++v) {
    if (b0[v] > 0.0) support.push_back(v);
  }
  Efg efg(instance, horizon, std::move(support), opts);
  return efg.solve(b0).value;
}

}  // namespace pegs
