#include "pegs/game.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace pegs {

namespace {

void check_vertex(int v, int n, const char* what) {
  if (v < 0 || v >= n) {
    std::ostringstream os;
    os << what << ": vertex " << v << " out of range [0," << n << ")";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

Graph::Graph(int vertex_count, const std::vector<std::pair<int, int>>& edges,
             bool undirected, const std::vector<int>& self_loops) {
  if (vertex_count <= 0) throw std::invalid_argument("graph: vertex_count must be positive");
  adj_.assign(vertex_count, {});
  for (const auto& [u, v] : edges) {
    check_vertex(u, vertex_count, "graph edge");
    check_vertex(v, vertex_count, "graph edge");
    adj_[u].push_back(v);
    if (undirected && u != v) adj_[v].push_back(u);
  }
  for (int v : self_loops) {
    check_vertex(v, vertex_count, "graph self_loop");
    adj_[v].push_back(v);
  }
  for (int v = 0; v < vertex_count; ++v) {
    auto& a = adj_[v];
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    if (a.empty()) {
      std::ostringstream os;
      os << "graph: vertex " << v << " has no outgoing arc (every unit must move each round)";
      throw std::invalid_argument(os.str());
    }
  }
}

bool Graph::has_arc(int u, int v) const {
  const auto& a = adj_.at(u);
  return std::binary_search(a.begin(), a.end(), v);
}

PursuerPosition::PursuerPosition(std::vector<int> vertices) : vs_(std::move(vertices)) {
  if (vs_.empty()) throw std::invalid_argument("pursuer position: needs at least one unit");
  std::sort(vs_.begin(), vs_.end());
}

bool PursuerPosition::contains(int v) const {
  return std::binary_search(vs_.begin(), vs_.end(), v);
}

std::string PursuerPosition::to_string() const {
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < vs_.size(); ++i) {
    if (i) os << ',';
    os << vs_[i];
  }
  os << '}';
  return os.str();
}

Belief::Belief(std::vector<double> mass) : mass_(std::move(mass)) {
  if (mass_.empty()) throw std::invalid_argument("belief: empty mass vector");
  double total = 0.0;
  for (double& m : mass_) {
    if (m < 0.0) {
      if (m < -1e-12) throw std::invalid_argument("belief: negative entry");
      m = 0.0;
    }
    total += m;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os << "belief: mass sums to " << total << ", expected 1 within " << kSumTolerance;
    throw std::invalid_argument(os.str());
  }
  for (double& m : mass_) m /= total;
}

Belief Belief::point_mass(int v, int vertex_count) {
  check_vertex(v, vertex_count, "belief point_mass");
  std::vector<double> m(vertex_count, 0.0);
  m[v] = 1.0;
  return Belief(std::move(m));
}

Belief Belief::uniform(const std::vector<int>& support, int vertex_count) {
  if (support.empty()) throw std::invalid_argument("belief uniform: empty support");
  std::vector<double> m(vertex_count, 0.0);
  for (int v : support) {
    check_vertex(v, vertex_count, "belief uniform");
    m[v] = 1.0;
  }
  double total = std::accumulate(m.begin(), m.end(), 0.0);
  for (double& x : m) x /= total;
  return Belief(std::move(m));
}

Belief Belief::uniform_off(const PursuerPosition& pos, int vertex_count) {
  std::vector<int> support;
  for (int v = 0; v < vertex_count; ++v) {
    if (!pos.contains(v)) support.push_back(v);
  }
  if (support.empty()) {
    throw SurelyCaughtError("uniform_off: pursuer occupies every vertex");
  }
  return uniform(support, vertex_count);
}

double Belief::mass_on(const PursuerPosition& pos) const {
  double total = 0.0;
  int prev = -1;
  for (int v : pos.vertices()) {
    if (v == prev) continue;  // multiset may stack units on one vertex
    total += mass_.at(v);
    prev = v;
  }
  return total;
}

EvaderStageStrategy::EvaderStageStrategy(const Graph& graph,
                                         std::vector<std::vector<double>> rows)
    : rows_(std::move(rows)) {
  const int n = graph.vertex_count();
  if (static_cast<int>(rows_.size()) != n) {
    throw std::invalid_argument("evader strategy: wrong row count");
  }
  for (int u = 0; u < n; ++u) {
    const auto& row = rows_[u];
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("evader strategy: wrong row length");
    }
    double total = 0.0;
    for (int v = 0; v < n; ++v) {
      if (row[v] < -1e-12) throw std::invalid_argument("evader strategy: negative probability");
      if (row[v] > 1e-12 && !graph.has_arc(u, v)) {
        throw std::invalid_argument("evader strategy: probability off the adjacency");
      }
      total += row[v];
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::invalid_argument("evader strategy: row does not sum to 1");
    }
  }
}

EvaderStageStrategy EvaderStageStrategy::uniform(const Graph& graph) {
  const int n = graph.vertex_count();
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (int u = 0; u < n; ++u) {
    const auto& nb = graph.neighbors(u);
    for (int v : nb) rows[u][v] = 1.0 / static_cast<double>(nb.size());
  }
  return EvaderStageStrategy(graph, std::move(rows));
}

EvaderStageStrategy EvaderStageStrategy::stay_put(const Graph& graph) {
  const int n = graph.vertex_count();
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (int u = 0; u < n; ++u) {
    if (!graph.has_arc(u, u)) {
      throw std::invalid_argument("stay_put strategy needs a self-loop at every vertex");
    }
    rows[u][u] = 1.0;
  }
  return EvaderStageStrategy(graph, std::move(rows));
}

GameInstance GameInstance::make(Graph graph, int n_units, double gamma,
                                PursuerPosition initial_position, Belief initial_belief) {
  if (n_units < 1) throw std::invalid_argument("instance: n_units must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("instance: gamma must lie in [0,1)");
  }
  if (initial_position.unit_count() != n_units) {
    throw std::invalid_argument("instance: pursuer_start must list n_units vertices");
  }
  for (int v : initial_position.vertices()) check_vertex(v, graph.vertex_count(), "pursuer_start");
  if (initial_belief.size() != graph.vertex_count()) {
    throw std::invalid_argument("instance: belief length must equal vertex count");
  }
  return GameInstance{std::move(graph), n_units, gamma, std::move(initial_position),
                      std::move(initial_belief)};
}

std::vector<PursuerPosition> expand_pursuer_moves(const Graph& graph,
                                                  const PursuerPosition& pos) {
  std::set<std::vector<int>> out;
  std::vector<int> current(pos.unit_count());
  const auto& units = pos.vertices();

  // Cartesian product over each unit's adjacency, canonicalized to multisets.
  std::vector<int> idx(units.size(), 0);
  while (true) {
    for (size_t i = 0; i < units.size(); ++i) {
      current[i] = graph.neighbors(units[i])[idx[i]];
    }
    std::vector<int> sorted = current;
    std::sort(sorted.begin(), sorted.end());
    out.insert(std::move(sorted));

    size_t k = 0;
    while (k < units.size()) {
      if (static_cast<size_t>(++idx[k]) < graph.neighbors(units[k]).size()) break;
      idx[k] = 0;
      ++k;
    }
    if (k == units.size()) break;
  }

  std::vector<PursuerPosition> result;
  result.reserve(out.size());
  for (auto& vs : out) result.push_back(PursuerPosition(vs));
  return result;
}

Belief transform_belief(const Graph& graph, const Belief& b,
                        const EvaderStageStrategy& pi_e, const PursuerPosition& s_p0) {
  const int n = graph.vertex_count();
  double off_mass = b.mass_off(s_p0);
  if (off_mass <= 1e-12) {
    throw DegenerateBeliefError("transform_belief: no mass outside the pursuer position");
  }
  std::vector<double> out(n, 0.0);
  for (int u = 0; u < n; ++u) {
    if (s_p0.contains(u) || b[u] <= 0.0) continue;
    const double w = b[u] / off_mass;
    for (int v : graph.neighbors(u)) out[v] += w * pi_e.prob(u, v);
  }
  return Belief(std::move(out));
}

Belief condition_not_caught(const Belief& b, const PursuerPosition& s_p1) {
  double off_mass = b.mass_off(s_p1);
  if (off_mass <= 1e-12) {
    throw SurelyCaughtError("condition_not_caught: all mass on the pursuer position");
  }
  std::vector<double> out(b.mass());
  for (int v = 0; v < b.size(); ++v) {
    out[v] = s_p1.contains(v) ? 0.0 : out[v] / off_mass;
  }
  return Belief(std::move(out));
}

std::vector<PursuerPosition> reachable_positions(const Graph& graph,
                                                 const PursuerPosition& initial) {
  std::set<PursuerPosition> seen{initial};
  std::deque<PursuerPosition> queue{initial};
  while (!queue.empty()) {
    PursuerPosition pos = queue.front();
    queue.pop_front();
    for (auto& next : expand_pursuer_moves(graph, pos)) {
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace pegs
