#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pegs/backup.hpp"
#include "pegs/efg_oracle.hpp"
#include "pegs/solver.hpp"
#include "test_helpers.hpp"

using namespace pegs;
using namespace pegs::testing;

TEST_CASE("triangle horizon-1 tree structure") {
  GameInstance inst = k3_instance();
  Efg efg = build_efg(inst, 1);
  CHECK(efg.pursuer_infoset_count() == 1);
  CHECK(efg.root_move_count() == 3);
  CHECK(efg.evader_infoset_count() == 2);  // one per supported start
  for (int members : efg.evader_infoset_sizes()) CHECK(members == 3);
}

TEST_CASE("singleton chance support") {
  Graph g = k3_loops();
  GameInstance inst =
      GameInstance::make(g, 1, 0.9, PursuerPosition({0}), Belief::point_mass(1, 3));
  Efg efg = build_efg(inst, 1);
  CHECK(efg.evader_infoset_count() == 1);
}

TEST_CASE("start on the pursuer vertex ends the branch at once") {
  Graph g = k3_loops();
  GameInstance inst =
      GameInstance::make(g, 1, 0.9, PursuerPosition({0}), Belief::point_mass(0, 3));
  Efg efg = build_efg(inst, 1);
  CHECK(efg.evader_infoset_count() == 0);
  CHECK(efg.solve(inst.initial_belief).value == doctest::Approx(1.0));
}

TEST_CASE("horizon must be positive") {
  CHECK_THROWS_AS(build_efg(k3_instance(), 0), std::invalid_argument);
}

TEST_CASE("node cap fails fast") {
  EfgOptions opts;
  opts.node_cap = 10;
  CHECK_THROWS_AS(build_efg(cycle4_instance(), 3, opts), std::runtime_error);
}

TEST_CASE("triangle horizon-1 value is the first-round capture bound") {
  GameInstance inst = k3_instance();
  CHECK(oracle_value(inst, 1, inst.initial_belief) == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("path horizon-1 value matches the 2x2 matrix game") {
  GameInstance inst = path3_instance();
  CHECK(oracle_value(inst, 1, Belief::point_mass(2, 3)) ==
        doctest::Approx(0.45).epsilon(1e-9));
}

TEST_CASE("equilibrium plan guarantees the value against a best response") {
  std::mt19937_64 rng(401);
  for (const GameInstance& inst : {k3_instance(), path3_instance(0.5)}) {
    std::vector<int> all;
    for (int v = 0; v < inst.graph.vertex_count(); ++v) all.push_back(v);
    Efg efg(inst, 2, all);
    for (int trial = 0; trial < 8; ++trial) {
      Belief b = random_belief(rng, inst.graph.vertex_count());
      auto sol = efg.solve(b);
      CHECK(std::abs(efg.best_response_value(sol.plan, b) - sol.value) <= 1e-8);
    }
  }
}

TEST_CASE("a fixed plan's best-response value is linear in the belief") {
  std::mt19937_64 rng(409);
  GameInstance inst = k3_instance();
  std::vector<int> all{0, 1, 2};
  Efg efg(inst, 2, all);
  for (int trial = 0; trial < 20; ++trial) {
    Belief b1 = random_belief(rng, 3);
    Belief b2 = random_belief(rng, 3);
    const double lambda = canonical_double(rng);
    std::vector<double> mix(3);
    for (int v = 0; v < 3; ++v) mix[v] = lambda * b1[v] + (1 - lambda) * b2[v];
    Belief bmix(mix);

    auto plan = efg.solve(bmix).plan;
    const double mixed = efg.best_response_value(plan, bmix);
    const double split = lambda * efg.best_response_value(plan, b1) +
                         (1 - lambda) * efg.best_response_value(plan, b2);
    CHECK(std::abs(mixed - split) <= 1e-7);
  }
}

TEST_CASE("the oracle value is convex in the belief") {
  std::mt19937_64 rng(419);
  GameInstance inst = cycle4_instance();
  std::vector<int> all{0, 1, 2, 3};
  Efg efg(inst, 2, all);
  for (int trial = 0; trial < 12; ++trial) {
    Belief b1 = random_belief(rng, 4);
    Belief b2 = random_belief(rng, 4);
    const double lambda = canonical_double(rng);
    std::vector<double> mix(4);
    for (int v = 0; v < 4; ++v) mix[v] = lambda * b1[v] + (1 - lambda) * b2[v];
    const double vm = efg.solve(Belief(mix)).value;
    const double va = efg.solve(b1).value;
    const double vb = efg.solve(b2).value;
    CHECK(vm <= lambda * va + (1 - lambda) * vb + 1e-8);
  }
}

TEST_CASE("finite-horizon iterates of H match the oracle") {
  std::mt19937_64 rng(421);
  for (const GameInstance& inst : {k3_instance(), path3_instance(), rand4_instance(0.5)}) {
    std::vector<int> all;
    for (int v = 0; v < inst.graph.vertex_count(); ++v) all.push_back(v);

    ValueFunction vt = horizon_zero(inst);
    for (int t = 1; t <= 2; ++t) {
      vt = apply_H(vt, inst);
      Efg efg(inst, t, all);
      for (int probe = 0; probe < 16; ++probe) {
        Belief b = random_belief(rng, inst.graph.vertex_count());
        const double dp = evaluate(vt.at(inst.initial_position), b);
        const double exact = efg.solve(b).value;
        CHECK(std::abs(dp - exact) <= 1e-6);
      }
    }
  }
}
