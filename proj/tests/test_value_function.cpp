#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pegs/value_function.hpp"
#include "test_helpers.hpp"

using namespace pegs;
using namespace pegs::testing;

namespace {

AlphaSet make_set(std::vector<std::vector<double>> vals) {
  AlphaSet out;
  for (auto& v : vals) out.push_back(AlphaVector{std::move(v)});
  return out;
}

AlphaSet random_set(std::mt19937_64& rng, int n, int count) {
  AlphaSet out;
  for (int i = 0; i < count; ++i) {
    std::vector<double> v(n);
    for (double& x : v) x = canonical_double(rng);
    out.push_back(AlphaVector{std::move(v)});
  }
  return out;
}

bool contains_point(const std::vector<Belief>& pts, const std::vector<double>& want,
                    double tol = 1e-7) {
  for (const auto& b : pts) {
    double dist = 0.0;
    for (size_t i = 0; i < want.size(); ++i) dist = std::max(dist, std::abs(b[i] - want[i]));
    if (dist <= tol) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("evaluate is the envelope") {
  AlphaSet one = make_set({{1, 0, 0}});
  CHECK(evaluate(one, Belief({0, 1, 0})) == doctest::Approx(0.0));
  AlphaSet two = make_set({{1, 0, 0}, {0, 1, 0}});
  CHECK(evaluate(two, Belief({0.5, 0.5, 0})) == doctest::Approx(0.5));
}

TEST_CASE("evaluate is convex in the belief") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 3);
    AlphaSet set = random_set(rng, n, 1 + static_cast<int>(rng() % 5));
    Belief b1 = random_belief(rng, n);
    Belief b2 = random_belief(rng, n);
    double lambda = canonical_double(rng);
    std::vector<double> mix(n);
    for (int i = 0; i < n; ++i) mix[i] = lambda * b1[i] + (1 - lambda) * b2[i];
    CHECK(evaluate(set, Belief(mix)) <=
          lambda * evaluate(set, b1) + (1 - lambda) * evaluate(set, b2) + 1e-9);
  }
}

TEST_CASE("prune removes dominated and interior vectors") {
  AlphaSet a = prune(make_set({{1, 1}, {0.5, 0.5}}));
  REQUIRE(a.size() == 1);
  CHECK(a[0].values == std::vector<double>{1, 1});

  AlphaSet b = prune(make_set({{1, 0}, {0, 1}}));
  CHECK(b.size() == 2);

  AlphaSet c = prune(make_set({{1, 0}, {0, 1}, {0.4, 0.4}}));
  REQUIRE(c.size() == 2);
  CHECK(c[0].values == std::vector<double>{1, 0});
  CHECK(c[1].values == std::vector<double>{0, 1});
}

TEST_CASE("prune keeps the envelope intact") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 2);
    AlphaSet before = random_set(rng, n, 2 + static_cast<int>(rng() % 10));
    AlphaSet after = prune(before);
    REQUIRE(!after.empty());
    for (int probe = 0; probe < 500; ++probe) {
      Belief b = random_belief(rng, n);
      CHECK(std::abs(evaluate(before, b) - evaluate(after, b)) <= 1e-9);
    }
  }
}

TEST_CASE("extreme points of a single piece are the corners") {
  AlphaSet set = make_set({{0.3, 0.7, 0.1}});
  auto pts = extreme_points(set, {1, 2});
  REQUIRE(pts.size() == 2);
  CHECK(contains_point(pts, {0, 1, 0}));
  CHECK(contains_point(pts, {0, 0, 1}));
}

TEST_CASE("extreme points include pairwise envelope crossings") {
  AlphaSet set = make_set({{0, 1, 0}, {0, 0, 1}});
  auto pts = extreme_points(set, {1, 2});
  REQUIRE(pts.size() == 3);
  CHECK(contains_point(pts, {0, 0.5, 0.5}));
}

// The third piece is constant 0.6 on the sub-simplex; enumerating pairwise
// intersections and filtering by maximality keeps its two crossings and
// drops the (0,0.5,0.5) crossing of the first two, now strictly interior.
TEST_CASE("extreme points filter non-maximal intersections") {
  AlphaSet set = make_set({{0, 1, 0}, {0, 0, 1}, {0, 0.6, 0.6}});
  auto pts = extreme_points(set, {1, 2});
  CHECK(contains_point(pts, {0, 1, 0}));
  CHECK(contains_point(pts, {0, 0, 1}));
  CHECK(contains_point(pts, {0, 0.6, 0.4}));
  CHECK(contains_point(pts, {0, 0.4, 0.6}));
  CHECK_FALSE(contains_point(pts, {0, 0.5, 0.5}, 1e-3));
  CHECK(pts.size() == 4);
}

TEST_CASE("extreme points on an empty free set") {
  AlphaSet set = make_set({{1, 0}});
  CHECK(extreme_points(set, {}).empty());
}

TEST_CASE("extreme points are feasible and cover the corners") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4;
    AlphaSet set = random_set(rng, n, 1 + static_cast<int>(rng() % 6));
    std::vector<int> free{0, 2, 3};
    auto pts = extreme_points(set, free);
    CHECK(contains_point(pts, {1, 0, 0, 0}));
    CHECK(contains_point(pts, {0, 0, 1, 0}));
    CHECK(contains_point(pts, {0, 0, 0, 1}));
    for (const auto& b : pts) {
      double total = 0.0;
      for (int v = 0; v < n; ++v) {
        CHECK(b[v] >= 0.0);
        total += b[v];
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(b[1] == 0.0);
    }
  }
}

// The witness search relies on this: for any convex piecewise-linear f, the
// maximum of f minus the envelope over the sub-simplex sits on a vertex of
// the envelope's subdivision. A dense grid can then never beat the vertex
// maximum by more than the grid resolution.
TEST_CASE("subdivision vertices witness the best advantage of a convex function") {
  std::mt19937_64 rng(127);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 4;
    std::vector<int> free{0, 2, 3};
    AlphaSet env = random_set(rng, n, 2 + static_cast<int>(rng() % 5));
    AlphaSet f = random_set(rng, n, 1 + static_cast<int>(rng() % 4));

    double best_vertex = -1e300;
    for (const Belief& b : extreme_points(env, free)) {
      best_vertex = std::max(best_vertex, evaluate(f, b) - evaluate(env, b));
    }

    double best_grid = -1e300;
    const int steps = 140;
    for (int a = 0; a <= steps; ++a) {
      for (int b = 0; a + b <= steps; ++b) {
        std::vector<double> bel(n, 0.0);
        bel[free[0]] = static_cast<double>(a) / steps;
        bel[free[1]] = static_cast<double>(b) / steps;
        bel[free[2]] = 1.0 - bel[free[0]] - bel[free[1]];
        Belief bb(bel);
        best_grid = std::max(best_grid, evaluate(f, bb) - evaluate(env, bb));
      }
    }
    CHECK(best_vertex >= best_grid - 3.0 / steps);
  }
}

TEST_CASE("max norm distance basics") {
  ValueFunction v, w;
  PursuerPosition p({0});
  v.set(p, make_set({{1, 0, 0}, {0.2, 0.6, 0.1}}));
  w.set(p, make_set({{1, 0, 0}, {0.2, 0.6, 0.1}}));
  CHECK(max_norm_distance(v, w).distance == doctest::Approx(0.0));

  ValueFunction shifted;
  shifted.set(p, make_set({{1.1, 0.1, 0.1}, {0.3, 0.7, 0.2}}));
  auto r = max_norm_distance(v, shifted);
  CHECK(r.distance == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(r.exact);

  ValueFunction mismatched;
  mismatched.set(PursuerPosition({1}), make_set({{1, 0, 0}}));
  CHECK_THROWS_AS(max_norm_distance(v, mismatched), std::invalid_argument);
}

TEST_CASE("max norm distance matches a dense grid oracle") {
  std::mt19937_64 rng(109);
  const int n = 3;
  for (int trial = 0; trial < 10; ++trial) {
    ValueFunction v, w;
    PursuerPosition p({0});
    v.set(p, random_set(rng, n, 1 + static_cast<int>(rng() % 4)));
    w.set(p, random_set(rng, n, 1 + static_cast<int>(rng() % 4)));

    double grid_max = 0.0;
    const int steps = 140;  // ~10^4 beliefs over the 2-simplex
    for (int a = 0; a <= steps; ++a) {
      for (int b = 0; a + b <= steps; ++b) {
        std::vector<double> bel{static_cast<double>(a) / steps,
                                static_cast<double>(b) / steps, 0.0};
        bel[2] = 1.0 - bel[0] - bel[1];
        Belief bb(bel);
        grid_max = std::max(grid_max, std::abs(evaluate(v.at(p), bb) - evaluate(w.at(p), bb)));
      }
    }
    auto exact = max_norm_distance(v, w);
    CHECK(exact.distance >= grid_max - 1e-9);
    CHECK(exact.distance <= grid_max + 2.0 / steps);
  }
}

TEST_CASE("max norm distance is a metric on random inputs") {
  std::mt19937_64 rng(113);
  PursuerPosition p({0});
  for (int trial = 0; trial < 15; ++trial) {
    ValueFunction a, b, c;
    a.set(p, random_set(rng, 3, 1 + static_cast<int>(rng() % 3)));
    b.set(p, random_set(rng, 3, 1 + static_cast<int>(rng() % 3)));
    c.set(p, random_set(rng, 3, 1 + static_cast<int>(rng() % 3)));
    const double ab = max_norm_distance(a, b).distance;
    const double ba = max_norm_distance(b, a).distance;
    const double ac = max_norm_distance(a, c).distance;
    const double cb = max_norm_distance(c, b).distance;
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(ab <= ac + cb + 1e-9);
  }
}
