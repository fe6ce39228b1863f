#include "pegs/backup.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

namespace pegs {

namespace {

constexpr double kSupportCutoff = 1e-12;

// agg(s_e') is the mixed continuation value of the evader landing on s_e'.
AlphaVector compose_from_aggregate(const Graph& graph, const PursuerPosition& s_p0,
                                   double gamma, const std::vector<double>& agg) {
  const int n = graph.vertex_count();
  std::vector<double> a(n);
  for (int s_e = 0; s_e < n; ++s_e) {
    if (s_p0.contains(s_e)) {
      a[s_e] = 1.0;
      continue;
    }
    double worst = std::numeric_limits<double>::infinity();
    for (int v : graph.neighbors(s_e)) worst = std::min(worst, agg[v]);
    a[s_e] = gamma * worst;
  }
  return AlphaVector{std::move(a)};
}

// Pointwise-domination prune for partial aggregate sums. Sound here because
// the min-compose step is monotone; convex domination is not preserved, so
// the witness LP only runs on the fully composed vectors.
void prune_pointwise(std::vector<std::vector<double>>& partials) {
  const size_t k = partials.size();
  std::vector<char> removed(k, 0);
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k && !removed[i]; ++j) {
      if (j == i || removed[j]) continue;
      bool geq = true;
      bool strict = false;
      for (size_t v = 0; v < partials[i].size() && geq; ++v) {
        if (partials[j][v] < partials[i][v]) geq = false;
        else if (partials[j][v] > partials[i][v]) strict = true;
      }
      if (geq && (strict || j < i)) removed[i] = 1;
    }
  }
  std::vector<std::vector<double>> kept;
  kept.reserve(k);
  for (size_t i = 0; i < k; ++i) {
    if (!removed[i]) kept.push_back(std::move(partials[i]));
  }
  partials = std::move(kept);
}

AlphaSet observed_prune(AlphaSet set, const BackupOptions& opts) {
  AlphaSet before;
  if (opts.prune_observer) before = set;
  AlphaSet after = prune(std::move(set));
  if (opts.prune_observer) opts.prune_observer(before, after);
  return after;
}

}  // namespace

AlphaVector compose_alpha(const Graph& graph, const PursuerPosition& s_p0,
                          const std::vector<PursuerPosition>& support,
                          const std::vector<double>& marginal,
                          const AlphaChoice& choice, const ValueFunction& v_prev,
                          double gamma) {
  if (support.size() != marginal.size() || support.size() != choice.pick.size()) {
    throw std::invalid_argument("compose_alpha: support, marginal and choice sizes differ");
  }
  std::vector<double> agg(graph.vertex_count(), 0.0);
  for (size_t i = 0; i < support.size(); ++i) {
    const AlphaSet& set = v_prev.at(support[i]);
    const AlphaVector& alpha = set.at(choice.pick[i]);
    for (int v = 0; v < graph.vertex_count(); ++v) {
      agg[v] += marginal[i] * alpha.values[v];
    }
  }
  return compose_from_aggregate(graph, s_p0, gamma, agg);
}

QFunction q_function(const Graph& graph, const PursuerPosition& s_p0,
                     const PursuerStageStrategy& strategy, const ValueFunction& v_prev,
                     double gamma, QMode mode, const BackupOptions& opts) {
  QFunction out;
  for (size_t i = 0; i < strategy.successors.size(); ++i) {
    if (strategy.marginal[i] > kSupportCutoff) {
      out.support.push_back(strategy.successors[i]);
      out.marginal.push_back(strategy.marginal[i]);
    }
  }

  if (mode == QMode::kAuto || mode == QMode::kFull) {
    double combos = 1.0;
    for (const auto& pos : out.support) {
      combos *= static_cast<double>(v_prev.at(pos).size());
    }
    if (combos > static_cast<double>(opts.combo_cap)) {
      if (mode == QMode::kFull) {
        std::ostringstream os;
        os << "q_function: " << combos << " alpha-choice combinations exceed the cap of "
           << opts.combo_cap;
        throw std::runtime_error(os.str());
      }
      mode = QMode::kPoint;
    } else {
      mode = QMode::kFull;
    }
  }

  const int n = graph.vertex_count();
  // Composition of the strategy's own joint weights. Mixing continuations
  // hedges against the evader's move, so this vector can sit strictly above
  // every pure-choice composition; it is tight at the strategy's witness
  // belief and keeps the incremental construction progressing.
  std::vector<double> joint_agg(n, 0.0);
  for (size_t i = 0; i < strategy.successors.size(); ++i) {
    const AlphaSet& set = v_prev.at(strategy.successors[i]);
    for (size_t a = 0; a < set.size(); ++a) {
      const double w = strategy.weights[i][a];
      if (w <= 0.0) continue;
      for (int v = 0; v < n; ++v) joint_agg[v] += w * set[a].values[v];
    }
  }
  AlphaVector joint = compose_from_aggregate(graph, s_p0, gamma, joint_agg);

  if (mode == QMode::kPoint) {
    out.alphas.push_back(std::move(joint));
    return out;
  }

  // Full enumeration of pure continuation choices, growing the weighted
  // sums one successor at a time.
  std::vector<std::vector<double>> partials{std::vector<double>(n, 0.0)};
  for (size_t i = 0; i < out.support.size(); ++i) {
    const AlphaSet& set = v_prev.at(out.support[i]);
    std::vector<std::vector<double>> grown;
    grown.reserve(partials.size() * set.size());
    for (const auto& g : partials) {
      for (const AlphaVector& alpha : set) {
        std::vector<double> next = g;
        for (int v = 0; v < n; ++v) next[v] += out.marginal[i] * alpha.values[v];
        grown.push_back(std::move(next));
      }
    }
    prune_pointwise(grown);
    partials = std::move(grown);
  }

  for (const auto& agg : partials) {
    out.alphas.push_back(compose_from_aggregate(graph, s_p0, gamma, agg));
  }
  out.alphas.push_back(std::move(joint));
  out.alphas = observed_prune(std::move(out.alphas), opts);
  return out;
}

AlphaSet construct_value_function(const Graph& graph, const PursuerPosition& s_p0,
                                  const ValueFunction& v_prev, double gamma,
                                  const BackupOptions& opts) {
  const int n = graph.vertex_count();
  std::vector<int> free_vertices;
  for (int v = 0; v < n; ++v) {
    if (!s_p0.contains(v)) free_vertices.push_back(v);
  }
  if (free_vertices.empty()) {
    // Every belief is fully caught; the value is one everywhere.
    return {AlphaVector{std::vector<double>(n, 1.0)}};
  }

  BackupStats local;
  Belief seed_belief = Belief::uniform(free_vertices, n);
  auto [seed_value, seed_strategy] =
      solve_stage_pursuer(graph, s_p0, seed_belief, v_prev, gamma);
  ++local.lp_solves;
  (void)seed_value;
  AlphaSet envelope =
      q_function(graph, s_p0, seed_strategy, v_prev, gamma, opts.q_mode, opts).alphas;

  // The stage LP depends only on the query belief (v_prev is fixed here);
  // extreme points repeat heavily across sweeps, so solves are memoized on
  // a quantized belief key.
  std::map<std::vector<long long>, std::pair<double, PursuerStageStrategy>> lp_cache;
  auto solve_at = [&](const Belief& b) -> const std::pair<double, PursuerStageStrategy>& {
    std::vector<long long> key(b.size());
    for (int v = 0; v < b.size(); ++v) key[v] = llround(b[v] * 1e12);
    auto it = lp_cache.find(key);
    if (it == lp_cache.end()) {
      it = lp_cache.emplace(std::move(key),
                            solve_stage_pursuer(graph, s_p0, b, v_prev, gamma))
               .first;
      ++local.lp_solves;
    }
    return it->second;
  };

  int witnesses = 0;
  while (true) {
    ++local.sweeps;
    double best_gain = opts.eps_improve;
    double best_lp_value = 0.0;
    Belief best_belief = seed_belief;
    bool found = false;
    PursuerStageStrategy best_strategy;
    for (const Belief& b : extreme_points(envelope, free_vertices, opts.extreme)) {
      const auto& [lp_value, strategy] = solve_at(b);
      const double gain = lp_value - evaluate(envelope, b);
      if (gain > best_gain) {
        best_gain = gain;
        best_lp_value = lp_value;
        best_belief = b;
        best_strategy = strategy;
        found = true;
      }
    }
    if (!found) break;

    if (++witnesses > opts.witness_cap) {
      if (opts.stats) {
        opts.stats->witnesses += local.witnesses;
        opts.stats->sweeps += local.sweeps;
        opts.stats->lp_solves += local.lp_solves;
      }
      std::ostringstream os;
      os << "construct_value_function: witness cap " << opts.witness_cap
         << " exceeded at position " << s_p0.to_string();
      throw WitnessCapError(os.str(), std::move(envelope));
    }
    ++local.witnesses;

    QFunction q = q_function(graph, s_p0, best_strategy, v_prev, gamma, opts.q_mode, opts);
    for (AlphaVector& alpha : q.alphas) envelope.push_back(std::move(alpha));
    envelope = observed_prune(std::move(envelope), opts);

    // The added composition is tight at the witness, so the gap there must
    // close; a leftover gap means the threshold sits below the numerical
    // floor and further sweeps would only spin.
    if (best_lp_value - evaluate(envelope, best_belief) > opts.eps_improve) break;
  }

  if (opts.stats) {
    opts.stats->witnesses += local.witnesses;
    opts.stats->sweeps += local.sweeps;
    opts.stats->lp_solves += local.lp_solves;
  }
  return envelope;
}

ValueFunction apply_H(const ValueFunction& v_prev, const GameInstance& instance,
                      const BackupOptions& opts) {
  const auto positions = reachable_positions(instance.graph, instance.initial_position);

  ValueFunction out;
  if (opts.threads <= 1 || positions.size() <= 1) {
    for (const auto& pos : positions) {
      out.set(pos,
              construct_value_function(instance.graph, pos, v_prev, instance.gamma, opts));
    }
    return out;
  }

  // Positions are independent given the immutable v_prev snapshot; the
  // observer and stats sink are serialized.
  std::mutex sink_mutex;
  BackupOptions task_opts = opts;
  BackupStats merged;
  task_opts.stats = opts.stats ? &merged : nullptr;
  if (opts.prune_observer) {
    auto inner = opts.prune_observer;
    task_opts.prune_observer = [&sink_mutex, inner](const AlphaSet& a, const AlphaSet& b) {
      std::lock_guard<std::mutex> lock(sink_mutex);
      inner(a, b);
    };
  }

  std::atomic<size_t> next{0};
  // Worker-pool over positions with a shared index; results keyed by slot.
  std::vector<AlphaSet> results(positions.size());
  const int workers = std::min<int>(opts.threads, static_cast<int>(positions.size()));
  std::vector<std::future<void>> pool;
  std::mutex stats_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.push_back(std::async(std::launch::async, [&]() {
      while (true) {
        const size_t idx = next.fetch_add(1);
        if (idx >= positions.size()) return;
        BackupStats task_stats;
        BackupOptions local = task_opts;
        local.stats = task_opts.stats ? &task_stats : nullptr;
        results[idx] = construct_value_function(instance.graph, positions[idx], v_prev,
                                                instance.gamma, local);
        if (task_opts.stats) {
          std::lock_guard<std::mutex> lock(stats_mutex);
          merged.witnesses += task_stats.witnesses;
          merged.sweeps += task_stats.sweeps;
          merged.lp_solves += task_stats.lp_solves;
        }
      }
    }));
  }
  for (auto& f : pool) f.get();
  if (opts.stats) {
    opts.stats->witnesses += merged.witnesses;
    opts.stats->sweeps += merged.sweeps;
    opts.stats->lp_solves += merged.lp_solves;
  }
  for (size_t i = 0; i < positions.size(); ++i) out.set(positions[i], std::move(results[i]));
  return out;
}

}  // namespace pegs
