#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pegs/game.hpp"
#include "pegs/stage_game.hpp"
#include "pegs/value_function.hpp"

namespace pegs {

// One continuation alpha-vector index per successor position in the
// strategy's support.
struct AlphaChoice {
  std::vector<int> pick;
};

enum class QMode { kAuto, kFull, kPoint };

struct BackupStats {
  int witnesses = 0;      // strategies added after the seed
  int sweeps = 0;         // extreme-point passes
  long long lp_solves = 0;
};

struct BackupOptions {
  QMode q_mode = QMode::kAuto;
  std::int64_t combo_cap = 100000;  // full-mode alpha-choice combinations
  int witness_cap = 200;
  // Witness acceptance threshold. Must sit above the stage-LP and pruning
  // noise floor (~1e-10 on near-degenerate envelopes) or the loop livelocks
  // re-adding vectors that cannot raise the envelope.
  double eps_improve = 1e-8;
  ExtremePointOptions extreme;
  int threads = 1;
  // Called with (before, after) for every prune performed during backups.
  std::function<void(const AlphaSet&, const AlphaSet&)> prune_observer;
  BackupStats* stats = nullptr;
};

// Raised when the witness loop hits the iteration cap; carries the best
// envelope found so far.
struct WitnessCapError : std::runtime_error {
  WitnessCapError(std::string message, AlphaSet envelope)
      : std::runtime_error(std::move(message)), best_envelope(std::move(envelope)) {}
  AlphaSet best_envelope;
};

// Value vector of "play the marginal, then follow the chosen continuation
// per successor": one on the pursuer's own vertices, otherwise gamma times
// the worst adjacent mixed continuation value.
AlphaVector compose_alpha(const Graph& graph, const PursuerPosition& s_p0,
                          const std::vector<PursuerPosition>& support,
                          const std::vector<double>& marginal,
                          const AlphaChoice& choice, const ValueFunction& v_prev,
                          double gamma);

struct QFunction {
  std::vector<PursuerPosition> support;
  std::vector<double> marginal;
  AlphaSet alphas;
};

// Realizable value vectors of the one-step strategy. Point mode composes
// the single vector implied by the strategy's joint (move, alpha) weights:
// a lower bound on the strategy's value, tight at its witness belief. Full
// mode additionally enumerates every pure continuation choice over the
// support, pointwise-pruning partial sums as the cross product grows.
QFunction q_function(const Graph& graph, const PursuerPosition& s_p0,
                     const PursuerStageStrategy& strategy, const ValueFunction& v_prev,
                     double gamma, QMode mode, const BackupOptions& opts = {});

// Incremental construction of the horizon-t set at one position: seed with
// the stage solution at the uniform off-belief, then keep resolving the
// stage LP at extreme points of the running envelope until none improves by
// more than eps_improve.
AlphaSet construct_value_function(const Graph& graph, const PursuerPosition& s_p0,
                                  const ValueFunction& v_prev, double gamma,
                                  const BackupOptions& opts = {});

// The dynamic-programming operator: one construct_value_function per
// position reachable from the instance's initial position.
ValueFunction apply_H(const ValueFunction& v_prev, const GameInstance& instance,
                      const BackupOptions& opts = {});

}  // namespace pegs
