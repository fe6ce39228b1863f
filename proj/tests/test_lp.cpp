#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pegs/lp.hpp"
#include "test_helpers.hpp"

using namespace pegs;
namespace lp = pegs::lp;

TEST_CASE("single bounded variable") {
  lp::LinearProgram p(lp::Sense::kMaximize);
  int x = p.add_variable(1.0);
  int r = p.add_row(lp::RowType::kLe, 3.0);
  p.set_coeff(r, x, 1.0);
  auto sol = lp::solve(p);
  REQUIRE(sol.status == lp::Status::kOptimal);
  CHECK(sol.objective == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sol.primal[x] == doctest::Approx(3.0));
  CHECK(sol.duals[r] == doctest::Approx(1.0));
}

TEST_CASE("matching pennies maximin") {
  // max v s.t. sum_i p_i * payoff(i, j) >= v for each column j, sum p = 1.
  lp::LinearProgram p(lp::Sense::kMaximize);
  int v = p.add_variable(1.0, -lp::kInfinity);
  int p0 = p.add_variable(0.0);
  int p1 = p.add_variable(0.0);
  const double payoff[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
  for (int j = 0; j < 2; ++j) {
    int row = p.add_row(lp::RowType::kGe, 0.0);
    p.set_coeff(row, p0, payoff[0][j]);
    p.set_coeff(row, p1, payoff[1][j]);
    p.set_coeff(row, v, -1.0);
  }
  int norm = p.add_row(lp::RowType::kEq, 1.0);
  p.set_coeff(norm, p0, 1.0);
  p.set_coeff(norm, p1, 1.0);

  auto sol = lp::solve(p);
  REQUIRE(sol.status == lp::Status::kOptimal);
  CHECK(sol.objective == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sol.primal[p0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sol.primal[p1] == doctest::Approx(0.5).epsilon(1e-10));
}

// Hand-built copy of the triangle-instance stage LP at the uniform
// off-belief with one-hot continuation values. The independent oracle is a
// grid sweep of gamma * min_j pi(j) over the strategy simplex.
TEST_CASE("triangle stage LP hits the grid-search maximin") {
  const double gamma = 0.9;
  lp::LinearProgram p(lp::Sense::kMaximize);
  int v1 = p.add_variable(gamma * 0.5, -lp::kInfinity);
  int v2 = p.add_variable(gamma * 0.5, -lp::kInfinity);
  int pi[3];
  for (int j = 0; j < 3; ++j) pi[j] = p.add_variable(0.0);
  for (int s_e : {1, 2}) {
    for (int move = 0; move < 3; ++move) {
      int row = p.add_row(lp::RowType::kGe, 0.0);
      p.set_coeff(row, pi[move], 1.0);
      p.set_coeff(row, s_e == 1 ? v1 : v2, -1.0);
    }
  }
  int norm = p.add_row(lp::RowType::kEq, 1.0);
  for (int j = 0; j < 3; ++j) p.set_coeff(norm, pi[j], 1.0);

  auto sol = lp::solve(p);
  REQUIRE(sol.status == lp::Status::kOptimal);

  double best_grid = 0.0;
  const int steps = 60;
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; a + b <= steps; ++b) {
      double x = static_cast<double>(a) / steps;
      double y = static_cast<double>(b) / steps;
      double z = 1.0 - x - y;
      best_grid = std::max(best_grid, gamma * std::min({x, y, z}));
    }
  }
  CHECK(best_grid == doctest::Approx(gamma / 3.0).epsilon(1e-9));
  CHECK(sol.objective == doctest::Approx(gamma / 3.0).epsilon(1e-9));
  for (int j = 0; j < 3; ++j) CHECK(sol.primal[pi[j]] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("status reporting") {
  lp::LinearProgram bad(lp::Sense::kMaximize);
  int x = bad.add_variable(1.0);
  int r = bad.add_row(lp::RowType::kLe, -1.0);
  bad.set_coeff(r, x, 1.0);
  CHECK(lp::solve(bad).status == lp::Status::kInfeasible);

  lp::LinearProgram open(lp::Sense::kMaximize);
  open.add_variable(1.0);
  CHECK(lp::solve(open).status == lp::Status::kUnbounded);

  lp::LinearProgram closed(lp::Sense::kMaximize);
  int y = closed.add_variable(-1.0);
  (void)y;
  auto sol = lp::solve(closed);
  REQUIRE(sol.status == lp::Status::kOptimal);
  CHECK(sol.objective == doctest::Approx(0.0));
}

TEST_CASE("minimization with equality rows and duals") {
  // min x + 2y s.t. x + y = 1, x, y >= 0.
  lp::LinearProgram p(lp::Sense::kMinimize);
  int x = p.add_variable(1.0);
  int y = p.add_variable(2.0);
  int r = p.add_row(lp::RowType::kEq, 1.0);
  p.set_coeff(r, x, 1.0);
  p.set_coeff(r, y, 1.0);
  auto sol = lp::solve(p);
  REQUIRE(sol.status == lp::Status::kOptimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.primal[x] == doctest::Approx(1.0));
  CHECK(sol.duals[r] * 1.0 == doctest::Approx(sol.objective).epsilon(1e-10));
}

TEST_CASE("hand-constructed primal and dual agree") {
  // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x, y >= 0.
  lp::LinearProgram primal(lp::Sense::kMaximize);
  int x = primal.add_variable(3.0);
  int y = primal.add_variable(2.0);
  int r0 = primal.add_row(lp::RowType::kLe, 4.0);
  primal.set_coeff(r0, x, 1.0);
  primal.set_coeff(r0, y, 1.0);
  int r1 = primal.add_row(lp::RowType::kLe, 6.0);
  primal.set_coeff(r1, x, 1.0);
  primal.set_coeff(r1, y, 3.0);

  lp::LinearProgram dual(lp::Sense::kMinimize);
  int u = dual.add_variable(4.0);
  int w = dual.add_variable(6.0);
  int d0 = dual.add_row(lp::RowType::kGe, 3.0);
  dual.set_coeff(d0, u, 1.0);
  dual.set_coeff(d0, w, 1.0);
  int d1 = dual.add_row(lp::RowType::kGe, 2.0);
  dual.set_coeff(d1, u, 1.0);
  dual.set_coeff(d1, w, 3.0);

  auto ps = lp::solve(primal);
  auto ds = lp::solve(dual);
  REQUIRE(ps.status == lp::Status::kOptimal);
  REQUIRE(ds.status == lp::Status::kOptimal);
  CHECK(ps.objective == doctest::Approx(ds.objective).epsilon(1e-10));
  CHECK(ps.objective == doctest::Approx(12.0));  // x=4, y=0
}

TEST_CASE("strong duality and complementary slackness on random LPs") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const int m = 2 + static_cast<int>(rng() % 4);

    std::vector<double> x0(n);
    for (double& v : x0) v = 2.0 * pegs::testing::canonical_double(rng);

    lp::LinearProgram p(trial % 2 == 0 ? lp::Sense::kMaximize : lp::Sense::kMinimize);
    std::vector<int> vars(n);
    for (int j = 0; j < n; ++j) {
      vars[j] = p.add_variable(2.0 * pegs::testing::canonical_double(rng) - 1.0);
    }
    std::vector<double> rhs(m);
    std::vector<std::vector<double>> A(m, std::vector<double>(n));
    for (int i = 0; i < m; ++i) {
      double ax = 0.0;
      for (int j = 0; j < n; ++j) {
        A[i][j] = 2.0 * pegs::testing::canonical_double(rng) - 1.0;
        ax += A[i][j] * x0[j];
      }
      const int kind = static_cast<int>(rng() % 3);
      lp::RowType type = kind == 0   ? lp::RowType::kLe
                         : kind == 1 ? lp::RowType::kGe
                                     : lp::RowType::kEq;
      double slackness = kind == 2 ? 0.0 : pegs::testing::canonical_double(rng);
      rhs[i] = type == lp::RowType::kLe ? ax + slackness
               : type == lp::RowType::kGe ? ax - slackness
                                          : ax;
      int row = p.add_row(type, rhs[i]);
      for (int j = 0; j < n; ++j) p.set_coeff(row, vars[j], A[i][j]);
    }
    // Keep the region bounded regardless of objective direction.
    int box = p.add_row(lp::RowType::kLe, 10.0 * n);
    rhs.push_back(10.0 * n);
    A.emplace_back(n, 1.0);
    for (int j = 0; j < n; ++j) p.set_coeff(box, vars[j], 1.0);

    auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::Status::kOptimal);

    double dual_obj = 0.0;
    for (size_t i = 0; i < rhs.size(); ++i) dual_obj += sol.duals[i] * rhs[i];
    CHECK(std::abs(dual_obj - sol.objective) <=
          1e-8 * (1.0 + std::abs(sol.objective)));

    // Complementary slackness: inactive rows carry zero dual.
    for (size_t i = 0; i < rhs.size(); ++i) {
      double ax = 0.0;
      for (int j = 0; j < n; ++j) ax += A[i][j] * sol.primal[vars[j]];
      CHECK(std::abs(sol.duals[i] * (ax - rhs[i])) <= 1e-7);
    }
  }
}

TEST_CASE("identical inputs give bit-identical solutions") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    lp::LinearProgram p(lp::Sense::kMaximize);
    int a = p.add_variable(pegs::testing::canonical_double(rng));
    int b = p.add_variable(pegs::testing::canonical_double(rng));
    int r = p.add_row(lp::RowType::kLe, 1.0 + pegs::testing::canonical_double(rng));
    p.set_coeff(r, a, 1.0);
    p.set_coeff(r, b, 1.0);
    auto s1 = lp::solve(p);
    auto s2 = lp::solve(p);
    CHECK(s1.objective == s2.objective);
    CHECK(s1.primal == s2.primal);
    CHECK(s1.duals == s2.duals);
  }
}
