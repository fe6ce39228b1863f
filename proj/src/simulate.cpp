#include "pegs/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <stdexcept>

#include "pegs/stage_game.hpp"

namespace pegs {

namespace {

constexpr double kQuantum = 1e-9;  // belief grid for stage-solution memoization

double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int sample_index(const std::vector<double>& weights, double u) {
  double acc = 0.0;
  int last = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  return last;
}

// Directed single-source shortest hop counts (pursuer movement metric).
std::vector<std::vector<int>> all_pairs_distance(const Graph& g) {
  const int n = g.vertex_count();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, n + 1));
  for (int s = 0; s < n; ++s) {
    std::deque<int> queue{s};
    dist[s][s] = 0;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : g.neighbors(u)) {
        if (dist[s][v] > dist[s][u] + 1) {
          dist[s][v] = dist[s][u] + 1;
          queue.push_back(v);
        }
      }
    }
  }
  return dist;
}

struct StageCache {
  const Graph& graph;
  const ValueFunction& v_prev;
  double gamma;
  std::map<std::pair<std::vector<int>, std::vector<long long>>, StageSolution> memo;

  const StageSolution& get(const PursuerPosition& pos, const Belief& b_off) {
    std::vector<long long> grid(b_off.size());
    for (int v = 0; v < b_off.size(); ++v) grid[v] = llround(b_off[v] / kQuantum);
    auto key = std::make_pair(pos.vertices(), std::move(grid));
    auto it = memo.find(key);
    if (it == memo.end()) {
      it = memo.emplace(std::move(key), solve_stage(graph, pos, b_off, v_prev, gamma)).first;
    }
    return it->second;
  }
};

// Returns the evader's next vertex.
int pick_evader_vertex(EvaderPolicy policy, const Graph& graph, int s_e,
                       const PursuerPosition& pos, const Belief& belief,
                       const StageSolution& stage,
                       const std::vector<std::vector<int>>& dist, std::mt19937_64& rng) {
  const auto& nb = graph.neighbors(s_e);
  auto nearest_pursuer = [&](int v) {
    int best = graph.vertex_count() + 1;
    for (int u : pos.vertices()) best = std::min(best, dist[u][v]);
    return best;
  };
  switch (policy) {
    case EvaderPolicy::kEquilibrium:
      return sample_index(stage.evader.row(s_e), to_unit(rng()));
    case EvaderPolicy::kRandomWalk:
      return nb[rng() % nb.size()];
    case EvaderPolicy::kGreedyAway: {
      int best = nb[0];
      for (int v : nb) {
        if (nearest_pursuer(v) > nearest_pursuer(best)) best = v;
      }
      return best;
    }
    case EvaderPolicy::kStayPut:
      return graph.has_arc(s_e, s_e) ? s_e : nb[rng() % nb.size()];
    case EvaderPolicy::kSoftAway: {
      std::vector<double> w(nb.size());
      double total = 0.0;
      for (size_t i = 0; i < nb.size(); ++i) {
        w[i] = 1.0 + nearest_pursuer(nb[i]);
        total += w[i];
      }
      for (double& x : w) x /= total;
      return nb[sample_index(w, to_unit(rng()))];
    }
    case EvaderPolicy::kAntiBelief: {
      int best = nb[0];
      for (int v : nb) {
        if (belief[v] < belief[best]) best = v;
      }
      return best;
    }
    case EvaderPolicy::kHighDegree: {
      int best = nb[0];
      for (int v : nb) {
        if (graph.neighbors(v).size() > graph.neighbors(best).size()) best = v;
      }
      return best;
    }
    case EvaderPolicy::kLazyRandom:
      if (to_unit(rng()) < 0.5 && graph.has_arc(s_e, s_e)) return s_e;
      return nb[rng() % nb.size()];
    case EvaderPolicy::kDrift:
      for (int v : nb) {
        if (v != s_e) return v;
      }
      return s_e;
  }
  throw std::logic_error("unknown evader policy");
}

}  // namespace

EvaderPolicy heuristic_evader(int index) {
  static const EvaderPolicy kList[kHeuristicEvaderCount] = {
      EvaderPolicy::kRandomWalk, EvaderPolicy::kGreedyAway,  EvaderPolicy::kStayPut,
      EvaderPolicy::kSoftAway,   EvaderPolicy::kAntiBelief,  EvaderPolicy::kHighDegree,
      EvaderPolicy::kLazyRandom, EvaderPolicy::kDrift};
  if (index < 0 || index >= kHeuristicEvaderCount) {
    throw std::out_of_range("heuristic_evader: index out of range");
  }
  return kList[index];
}

RolloutStats rollout(const GameInstance& instance, const ValueFunction& final_vf,
                     const RolloutConfig& config) {
  if (config.episodes <= 0) throw std::invalid_argument("rollout: episodes must be positive");
  const Graph& graph = instance.graph;
  const double gamma = instance.gamma;

  int horizon = config.horizon_cap;
  if (horizon <= 0) {
    if (gamma <= 0.0) {
      horizon = 1;
    } else {
      horizon = static_cast<int>(
          std::ceil(std::log(config.tail_tolerance) / std::log(gamma)));
      horizon = std::max(horizon, 1);
    }
  }

  StageCache cache{graph, final_vf, gamma, {}};
  const auto dist = all_pairs_distance(graph);

  RolloutStats stats;
  stats.episodes = config.episodes;
  stats.capture_histogram.assign(horizon + 1, 0);
  double sum = 0.0;
  double sumsq = 0.0;

  for (long long episode = 0; episode < config.episodes; ++episode) {
    std::mt19937_64 rng(splitmix64(config.seed ^ static_cast<std::uint64_t>(episode)));

    int s_e = sample_index(instance.initial_belief.mass(), to_unit(rng()));
    PursuerPosition pos = instance.initial_position;
    double reward = 0.0;

    if (pos.contains(s_e)) {
      reward = 1.0;
      ++stats.capture_histogram[0];
    } else {
      Belief belief = condition_not_caught(instance.initial_belief, pos);
      double discount = 1.0;
      bool captured = false;
      for (int round = 1; round <= horizon; ++round) {
        discount *= gamma;
        const StageSolution& stage = cache.get(pos, belief);
        const int move = sample_index(stage.pursuer.marginal, to_unit(rng()));
        const PursuerPosition& s_p1 = stage.pursuer.successors[move];
        const int s_e1 =
            pick_evader_vertex(config.evader, graph, s_e, pos, belief, stage, dist, rng);

        if (s_p1.contains(s_e1)) {
          reward = discount;
          ++stats.capture_histogram[round];
          captured = true;
          break;
        }
        // The pursuer's model of the evader is the equilibrium strategy; his
        // internal belief follows it regardless of the sampled controller.
        Belief pushed = transform_belief(graph, belief, stage.evader, pos);
        if (pushed.mass_off(s_p1) <= 1e-12) {
          // Unreachable against the modeled evader; an off-model opponent
          // walked out of the belief support. Start over from ignorance.
          belief = Belief::uniform_off(s_p1, graph.vertex_count());
        } else {
          belief = condition_not_caught(pushed, s_p1);
        }
        pos = s_p1;
        s_e = s_e1;
      }
      if (!captured) ++stats.uncaptured;
    }

    sum += reward;
    sumsq += reward * reward;
  }

  const double n = static_cast<double>(config.episodes);
  stats.mean = sum / n;
  if (config.episodes > 1) {
    const double var = std::max(0.0, (sumsq - n * stats.mean * stats.mean) / (n - 1.0));
    stats.std_error = std::sqrt(var / n);
  }
  return stats;
}

}  // namespace pegs
