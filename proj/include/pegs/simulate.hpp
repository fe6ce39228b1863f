#pragma once

#include <cstdint>
#include <vector>

#include "pegs/game.hpp"
#include "pegs/value_function.hpp"

namespace pegs {

// Evader controllers for rollouts. The LP evader replays the equilibrium
// stage strategy; the rest are fixed heuristics used as lower-bound probes.
enum class EvaderPolicy {
  kEquilibrium,
  kRandomWalk,
  kGreedyAway,      // maximize the nearest-pursuer graph distance
  kStayPut,         // hold position when a loop allows it
  kSoftAway,        // sample proportional to 1 + nearest-pursuer distance
  kAntiBelief,      // move where the pursuer's belief is lowest
  kHighDegree,      // move to the best-connected neighbor
  kLazyRandom,      // stay half the time, otherwise walk randomly
  kDrift,           // deterministic lowest-index move away from the spot
};

constexpr int kHeuristicEvaderCount = 8;
EvaderPolicy heuristic_evader(int index);  // 0..7

struct RolloutConfig {
  long long episodes = 100000;
  std::uint64_t seed = 1;
  double tail_tolerance = 1e-4;
  int horizon_cap = 0;  // 0 derives the cap from gamma and tail_tolerance
  EvaderPolicy evader = EvaderPolicy::kEquilibrium;
};

struct RolloutStats {
  double mean = 0.0;
  double std_error = 0.0;
  long long episodes = 0;
  long long uncaptured = 0;
  std::vector<long long> capture_histogram;  // index = capture round, 0 = at placement
};

// Plays the converged stage strategies forward. The pursuer samples from the
// stage LP marginal and updates an internal belief with the equilibrium
// evader model plus his own realized move; capture is checked on the real
// sampled positions. Deterministic under a fixed config.
RolloutStats rollout(const GameInstance& instance, const ValueFunction& final_vf,
                     const RolloutConfig& config);

}  // namespace pegs
