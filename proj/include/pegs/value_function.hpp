#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "pegs/game.hpp"

namespace pegs {

// One linear payoff function over beliefs: the expected discounted pursuer
// reward of one strategy, one entry per vertex.
struct AlphaVector {
  std::vector<double> values;

  double dot(std::span<const double> b) const {
    double s = 0.0;
    for (size_t i = 0; i < values.size(); ++i) s += values[i] * b[i];
    return s;
  }
  double dot(const Belief& b) const { return dot(std::span<const double>(b.mass())); }
  bool operator==(const AlphaVector&) const = default;
};

using AlphaSet = std::vector<AlphaVector>;

// Upper envelope of the set at a belief.
double evaluate(const AlphaSet& set, std::span<const double> b);
double evaluate(const AlphaSet& set, const Belief& b);

// Removes pointwise-dominated vectors, then vectors whose witness LP shows
// no belief where they beat the rest by more than 1e-9. The surviving
// envelope matches the input within that tolerance everywhere.
AlphaSet prune(AlphaSet set);

struct ExtremePointOptions {
  // Exact enumeration gates: free-dimension <= 7 and set size <= 64, plus a
  // combination budget so degenerate inputs fall back instead of thrashing.
  int exact_max_free = 8;
  int exact_max_alphas = 64;
  std::int64_t combination_budget = 2000000;
  int fallback_samples = 512;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

// Vertices of the polyhedral subdivision that the set's upper envelope
// induces on the sub-simplex supported by `free_vertices`. Always contains
// the sub-simplex corners; beyond the exact gates it degrades to corners,
// seeded random beliefs, and pairwise envelope crossings along edges.
std::vector<Belief> extreme_points(const AlphaSet& set,
                                   const std::vector<int>& free_vertices,
                                   const ExtremePointOptions& opts = {});
// `exact_out` reports whether the exact enumeration ran (vs the fallback).
std::vector<Belief> extreme_points(const AlphaSet& set,
                                   const std::vector<int>& free_vertices,
                                   const ExtremePointOptions& opts, bool* exact_out);

// Per-position alpha-vector sets; the value at a belief is the position
// set's upper envelope there.
class ValueFunction {
 public:
  using Map = std::map<PursuerPosition, AlphaSet>;

  ValueFunction() = default;
  explicit ValueFunction(Map sets) : sets_(std::move(sets)) {}

  const AlphaSet& at(const PursuerPosition& pos) const;
  bool contains(const PursuerPosition& pos) const { return sets_.count(pos) > 0; }
  void set(const PursuerPosition& pos, AlphaSet alphas);
  const Map& sets() const { return sets_; }
  int position_count() const { return static_cast<int>(sets_.size()); }

 private:
  Map sets_;
};

struct MaxNormResult {
  double distance = 0.0;
  bool exact = true;  // false when any position used the fallback point set
};

// Max over positions and beliefs of |v(b) - w(b)|. The difference of two
// convex envelopes attains its extremes at subdivision vertices of one side
// or the other, so both extreme-point sets are evaluated.
MaxNormResult max_norm_distance(const ValueFunction& v, const ValueFunction& w,
                                const ExtremePointOptions& opts = {});

}  // namespace pegs
