#pragma once

#include <cstdint>
#include <vector>

#include "pegs/game.hpp"

namespace pegs {

struct EfgOptions {
  std::int64_t node_cap = 1000000;
};

// Explicit finite-horizon game tree in sequence form. The pursuer owns one
// information set per sequence of his own moves; the evader owns one per
// history prefix (she sees everything except the pursuer's concurrent
// move). Chance picks the evader's start; capture at round tau pays
// gamma^tau, an exhausted horizon pays zero. Built once per horizon, then
// solvable for any belief over the chance support.
class Efg {
 public:
  Efg(const GameInstance& instance, int horizon, std::vector<int> chance_support,
      const EfgOptions& opts = {});

  struct Solution {
    double value = 0.0;
    std::vector<double> plan;  // realization probability per pursuer sequence
  };

  // Exact game value and an equilibrium pursuer realization plan via the
  // sequence-form LP.
  Solution solve(const Belief& b0) const;

  // Value of a fixed pursuer realization plan against a best-responding
  // evader, by backward induction over her information sets.
  double best_response_value(const std::vector<double>& plan, const Belief& b0) const;

  std::int64_t node_count() const { return nodes_; }
  int pursuer_sequence_count() const { return static_cast<int>(pseq_parent_.size()); }
  int pursuer_infoset_count() const;
  int evader_infoset_count() const { return static_cast<int>(einfo_parent_seq_.size()); }
  int evader_sequence_count() const { return static_cast<int>(eseq_infoset_.size()); }
  int root_move_count() const { return static_cast<int>(pseq_children_[0].size()); }
  const std::vector<int>& evader_infoset_sizes() const { return einfo_members_; }

 private:
  void expand(int chance_vertex, int pseq, int eseq, int evader_vertex, int round);

  const Graph& graph_;
  double gamma_;
  int horizon_;
  std::int64_t node_cap_;
  std::int64_t nodes_ = 0;

  // Pursuer sequences; id 0 is the empty sequence at the initial position.
  std::vector<int> pseq_parent_;
  std::vector<PursuerPosition> pseq_position_;
  std::vector<char> pseq_acting_;
  std::vector<std::vector<int>> pseq_children_;

  // Evader information sets and sequences; evader sequence 0 is empty.
  std::vector<int> einfo_parent_seq_;
  std::vector<int> einfo_members_;
  std::vector<std::vector<int>> einfo_action_seqs_;
  std::vector<int> eseq_infoset_;                  // owning infoset, -1 for empty
  std::vector<std::vector<int>> infosets_of_seq_;  // infosets reached through a sequence

  struct Payoff {
    int pseq;
    int eseq;
    int chance_vertex;
    double utility;
  };
  std::vector<Payoff> payoffs_;
};

// Tree for the instance's own initial belief support.
Efg build_efg(const GameInstance& instance, int horizon, const EfgOptions& opts = {});

// Build-and-solve convenience: exact horizon-t value at the given belief.
double oracle_value(const GameInstance& instance, int horizon, const Belief& b0,
                    const EfgOptions& opts = {});

}  // namespace pegs
