#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pegs {

// Thrown by transform_belief when the belief has no mass outside the
// pursuer's position (the transform would divide by zero).
struct DegenerateBeliefError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by condition_not_caught when all belief mass sits on the pursuer's
// vertices; callers treat this as "evader surely caught".
struct SurelyCaughtError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Directed graph over vertices 0..n-1. Every vertex must have at least one
// outgoing arc (units have to move every round; staying requires an explicit
// self-loop). Adjacency lists are kept sorted and duplicate-free.
class Graph {
 public:
  // Builds from an edge list. When `undirected` is true each edge [u,v] is
  // expanded into both arcs. `self_loops` lists vertices that receive a loop.
  Graph(int vertex_count, const std::vector<std::pair<int, int>>& edges,
        bool undirected = true, const std::vector<int>& self_loops = {});

  int vertex_count() const { return static_cast<int>(adj_.size()); }
  const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
  bool has_arc(int u, int v) const;

 private:
  std::vector<std::vector<int>> adj_;
};

// Multiset of N pursuer vertices, stored sorted ascending (canonical form).
class PursuerPosition {
 public:
  PursuerPosition() = default;
  explicit PursuerPosition(std::vector<int> vertices);

  const std::vector<int>& vertices() const { return vs_; }
  int unit_count() const { return static_cast<int>(vs_.size()); }
  bool contains(int v) const;
  std::string to_string() const;

  bool operator==(const PursuerPosition&) const = default;
  auto operator<=>(const PursuerPosition&) const = default;

 private:
  std::vector<int> vs_;
};

// Probability distribution over the evader's vertex. Construction
// renormalizes when the total is within 1e-9 of one and rejects otherwise;
// negative entries beyond -1e-12 are rejected (smaller ones clamp to zero).
class Belief {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit Belief(std::vector<double> mass);
  static Belief point_mass(int v, int vertex_count);
  static Belief uniform(const std::vector<int>& support, int vertex_count);
  // Uniform over vertices not occupied by `pos`.
  static Belief uniform_off(const PursuerPosition& pos, int vertex_count);

  const std::vector<double>& mass() const { return mass_; }
  double operator[](int v) const { return mass_.at(v); }
  int size() const { return static_cast<int>(mass_.size()); }

  double mass_on(const PursuerPosition& pos) const;
  double mass_off(const PursuerPosition& pos) const { return 1.0 - mass_on(pos); }

 private:
  std::vector<double> mass_;
};

// One-step evader strategy: a row per vertex, each a distribution over that
// vertex's adjacency. Stored dense (|V| x |V|) with zeros off the adjacency.
class EvaderStageStrategy {
 public:
  EvaderStageStrategy(const Graph& graph, std::vector<std::vector<double>> rows);
  static EvaderStageStrategy uniform(const Graph& graph);
  static EvaderStageStrategy stay_put(const Graph& graph);  // requires loops

  const std::vector<double>& row(int from) const { return rows_.at(from); }
  double prob(int from, int to) const { return rows_.at(from).at(to); }
  int vertex_count() const { return static_cast<int>(rows_.size()); }

 private:
  std::vector<std::vector<double>> rows_;
};

struct GameInstance {
  Graph graph;
  int n_units;
  double gamma;
  PursuerPosition initial_position;
  Belief initial_belief;

  // Validates cross-field invariants (gamma in [0,1), position/belief sizes).
  static GameInstance make(Graph graph, int n_units, double gamma,
                           PursuerPosition initial_position, Belief initial_belief);
};

// All canonical positions reachable in one round by moving every unit to an
// adjacent vertex. Output is sorted and duplicate-free.
std::vector<PursuerPosition> expand_pursuer_moves(const Graph& graph,
                                                  const PursuerPosition& pos);

// Push-forward of the off-position belief through the evader's one-step
// strategy: b'(v) = sum over u not in s_p0 of b(u) pi_e(u, v), normalized by
// the off-position mass.
Belief transform_belief(const Graph& graph, const Belief& b,
                        const EvaderStageStrategy& pi_e,
                        const PursuerPosition& s_p0);

// Zeroes the mass on s_p1 and renormalizes the rest.
Belief condition_not_caught(const Belief& b, const PursuerPosition& s_p1);

// Breadth-first closure of expand_pursuer_moves from `initial`, sorted.
std::vector<PursuerPosition> reachable_positions(const Graph& graph,
                                                 const PursuerPosition& initial);

}  // namespace pegs
