#include "pegs/value_function.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pegs/lp.hpp"

namespace pegs {

namespace {

constexpr double kWitnessTol = 1e-9;   // prune / maximality threshold
constexpr double kDedupTol = 1e-8;     // extreme-point coordinate distance

}  // namespace

double evaluate(const AlphaSet& set, std::span<const double> b) {
  if (set.empty()) throw std::invalid_argument("evaluate: empty alpha set");
  double best = set[0].dot(b);
  for (size_t i = 1; i < set.size(); ++i) best = std::max(best, set[i].dot(b));
  return best;
}

double evaluate(const AlphaSet& set, const Belief& b) {
  return evaluate(set, std::span<const double>(b.mass()));
}

// max_b (alpha . b - max_j other_j . b) over the simplex.
static double witness_margin(const AlphaVector& alpha, const AlphaSet& others) {
  lp::LinearProgram p(lp::Sense::kMaximize);
  const int n = static_cast<int>(alpha.values.size());
  const int d = p.add_variable(1.0, -lp::kInfinity);
  std::vector<int> bvar(n);
  for (int v = 0; v < n; ++v) bvar[v] = p.add_variable(0.0);
  for (const AlphaVector& other : others) {
    int row = p.add_row(lp::RowType::kGe, 0.0);
    for (int v = 0; v < n; ++v) {
      p.set_coeff(row, bvar[v], alpha.values[v] - other.values[v]);
    }
    p.set_coeff(row, d, -1.0);
  }
  int norm = p.add_row(lp::RowType::kEq, 1.0);
  for (int v = 0; v < n; ++v) p.set_coeff(norm, bvar[v], 1.0);
  auto sol = lp::solve(p);
  if (sol.status != lp::Status::kOptimal) {
    throw std::runtime_error("prune: witness LP did not solve");
  }
  return sol.objective;
}

AlphaSet prune(AlphaSet set) {
  if (set.empty()) throw std::invalid_argument("prune: empty alpha set");
  const size_t k = set.size();
  std::vector<char> removed(k, 0);

  // Pointwise domination; exact ties keep the earliest copy.
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k && !removed[i]; ++j) {
      if (j == i || removed[j]) continue;
      bool geq = true;
      bool strict = false;
      for (size_t v = 0; v < set[i].values.size() && geq; ++v) {
        if (set[j].values[v] < set[i].values[v]) geq = false;
        else if (set[j].values[v] > set[i].values[v]) strict = true;
      }
      if (geq && (strict || j < i)) removed[i] = 1;
    }
  }

  // Witness LP against all current survivors.
  for (size_t i = 0; i < k; ++i) {
    if (removed[i]) continue;
    AlphaSet others;
    for (size_t j = 0; j < k; ++j) {
      if (j != i && !removed[j]) others.push_back(set[j]);
    }
    if (others.empty()) break;
    if (witness_margin(set[i], others) <= kWitnessTol) removed[i] = 1;
  }

  AlphaSet out;
  for (size_t i = 0; i < k; ++i) {
    if (!removed[i]) out.push_back(std::move(set[i]));
  }
  return out;
}

namespace {

// Alpha vectors restricted to the free coordinates.
std::vector<std::vector<double>> restrict_to(const AlphaSet& set,
                                             const std::vector<int>& free_vertices) {
  std::vector<std::vector<double>> out;
  out.reserve(set.size());
  for (const auto& a : set) {
    std::vector<double> r(free_vertices.size());
    for (size_t i = 0; i < free_vertices.size(); ++i) r[i] = a.values[free_vertices[i]];
    out.push_back(std::move(r));
  }
  return out;
}

double restricted_env(const std::vector<std::vector<double>>& alphas,
                      const std::vector<double>& b) {
  double best = -lp::kInfinity;
  for (const auto& a : alphas) {
    double s = 0.0;
    for (size_t i = 0; i < b.size(); ++i) s += a[i] * b[i];
    best = std::max(best, s);
  }
  return best;
}

void push_unique(std::vector<std::vector<double>>& points, std::vector<double> b) {
  for (const auto& q : points) {
    double dist = 0.0;
    for (size_t i = 0; i < b.size(); ++i) dist = std::max(dist, std::abs(q[i] - b[i]));
    if (dist <= kDedupTol) return;
  }
  points.push_back(std::move(b));
}

// Iterates subsets of {0..n-1} of the given size. Returns false when done.
bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[i] == n - k + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  return true;
}

// Solves the k x k system pinning a candidate subdivision vertex: the
// support sums to one and the chosen alphas tie on it. Returns false when
// the system is singular.
bool solve_vertex_system(const std::vector<std::vector<double>>& alphas,
                         const std::vector<int>& support,
                         const std::vector<int>& chosen, std::vector<double>& b_out) {
  const int k = static_cast<int>(support.size());
  std::vector<std::vector<double>> mat(k, std::vector<double>(k + 1, 0.0));
  for (int c = 0; c < k; ++c) mat[0][c] = 1.0;
  mat[0][k] = 1.0;
  for (int r = 1; r < k; ++r) {
    const auto& a0 = alphas[chosen[0]];
    const auto& ar = alphas[chosen[r]];
    for (int c = 0; c < k; ++c) mat[r][c] = a0[support[c]] - ar[support[c]];
  }
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r) {
      if (std::abs(mat[r][col]) > std::abs(mat[piv][col])) piv = r;
    }
    if (std::abs(mat[piv][col]) < 1e-12) return false;
    std::swap(mat[col], mat[piv]);
    for (int r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = mat[r][col] / mat[col][col];
      if (f == 0.0) continue;
      for (int c = col; c <= k; ++c) mat[r][c] -= f * mat[col][c];
    }
  }
  b_out.assign(k, 0.0);
  for (int r = 0; r < k; ++r) b_out[r] = mat[r][k] / mat[r][r];
  return true;
}

}  // namespace

std::vector<Belief> extreme_points(const AlphaSet& set,
                                   const std::vector<int>& free_vertices,
                                   const ExtremePointOptions& opts) {
  return extreme_points(set, free_vertices, opts, nullptr);
}

std::vector<Belief> extreme_points(const AlphaSet& set,
                                   const std::vector<int>& free_vertices,
                                   const ExtremePointOptions& opts, bool* exact_out) {
  if (set.empty()) throw std::invalid_argument("extreme_points: empty alpha set");
  if (exact_out) *exact_out = true;
  if (free_vertices.empty()) return {};

  const int n = static_cast<int>(set[0].values.size());
  const int f = static_cast<int>(free_vertices.size());

  // Only envelope-active restricted pieces shape the subdivision.
  std::vector<std::vector<double>> restricted = restrict_to(set, free_vertices);
  {
    AlphaSet sub;
    sub.reserve(restricted.size());
    for (auto& r : restricted) sub.push_back(AlphaVector{r});
    sub = prune(std::move(sub));
    restricted.clear();
    for (auto& a : sub) restricted.push_back(std::move(a.values));
  }
  const int k = static_cast<int>(restricted.size());

  std::vector<std::vector<double>> points;  // coordinates over free_vertices
  for (int c = 0; c < f; ++c) {
    std::vector<double> corner(f, 0.0);
    corner[c] = 1.0;
    push_unique(points, std::move(corner));
  }

  bool exact = f <= opts.exact_max_free && k <= opts.exact_max_alphas;
  if (exact) {
    // Combination budget: sum over sizes of C(f,s)*C(k,s).
    double combos = 0.0;
    for (int s = 2; s <= std::min(f, k); ++s) {
      double cf = 1.0, ck = 1.0;
      for (int i = 0; i < s; ++i) {
        cf *= static_cast<double>(f - i) / (i + 1);
        ck *= static_cast<double>(k - i) / (i + 1);
      }
      combos += cf * ck;
    }
    if (combos > static_cast<double>(opts.combination_budget)) exact = false;
  }

  if (exact) {
    std::vector<double> local, full(f);
    for (int s = 2; s <= std::min(f, k); ++s) {
      std::vector<int> support(s);
      for (int i = 0; i < s; ++i) support[i] = i;
      do {
        std::vector<int> chosen(s);
        for (int i = 0; i < s; ++i) chosen[i] = i;
        do {
          if (!solve_vertex_system(restricted, support, chosen, local)) continue;
          bool feasible = true;
          for (double v : local) feasible &= v >= -kWitnessTol;
          if (!feasible) continue;
          std::fill(full.begin(), full.end(), 0.0);
          double total = 0.0;
          for (int i = 0; i < s; ++i) {
            full[support[i]] = std::max(local[i], 0.0);
            total += full[support[i]];
          }
          for (double& v : full) v /= total;
          // The tied pieces must actually attain the envelope there.
          double tied = 0.0;
          for (int c = 0; c < f; ++c) tied += restricted[chosen[0]][c] * full[c];
          if (tied < restricted_env(restricted, full) - kWitnessTol) continue;
          push_unique(points, full);
        } while (next_combination(chosen, k));
      } while (next_combination(support, f));
    }
  } else {
    // Fallback: corners, seeded random beliefs, and pairwise crossings along
    // corner-to-corner edges. Complete enough for witness search at scale.
    std::mt19937_64 rng(opts.seed);
    for (int i = 0; i < opts.fallback_samples; ++i) {
      std::vector<double> b(f);
      double total = 0.0;
      for (double& x : b) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        x = -std::log(u + 1e-300);
        total += x;
      }
      for (double& x : b) x /= total;
      push_unique(points, std::move(b));
    }
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        for (int u = 0; u < f; ++u) {
          const double du = restricted[i][u] - restricted[j][u];
          for (int w = u + 1; w < f; ++w) {
            const double dw = restricted[i][w] - restricted[j][w];
            if (du * dw < 0.0) {
              const double t = du / (du - dw);
              std::vector<double> b(f, 0.0);
              b[u] = 1.0 - t;
              b[w] = t;
              push_unique(points, std::move(b));
            }
          }
        }
      }
    }
  }

  if (exact_out) *exact_out = exact;

  std::vector<Belief> out;
  out.reserve(points.size());
  for (const auto& local : points) {
    std::vector<double> full(n, 0.0);
    for (int i = 0; i < f; ++i) full[free_vertices[i]] = local[i];
    out.push_back(Belief(std::move(full)));
  }
  return out;
}

const AlphaSet& ValueFunction::at(const PursuerPosition& pos) const {
  auto it = sets_.find(pos);
  if (it == sets_.end()) {
    throw std::out_of_range("value function: no alpha set for position " + pos.to_string());
  }
  return it->second;
}

void ValueFunction::set(const PursuerPosition& pos, AlphaSet alphas) {
  if (alphas.empty()) throw std::invalid_argument("value function: empty alpha set");
  sets_[pos] = std::move(alphas);
}

MaxNormResult max_norm_distance(const ValueFunction& v, const ValueFunction& w,
                                const ExtremePointOptions& opts) {
  if (v.position_count() != w.position_count()) {
    throw std::invalid_argument("max_norm_distance: position sets differ");
  }
  MaxNormResult result;
  auto it_w = w.sets().begin();
  for (const auto& [pos, set_v] : v.sets()) {
    if (it_w->first != pos) {
      throw std::invalid_argument("max_norm_distance: position sets differ");
    }
    const AlphaSet& set_w = it_w->second;
    ++it_w;

    const int n = static_cast<int>(set_v[0].values.size());
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;

    for (const AlphaSet* side : {&set_v, &set_w}) {
      bool exact = true;
      for (const Belief& b : extreme_points(*side, all, opts, &exact)) {
        const double d = std::abs(evaluate(set_v, b) - evaluate(set_w, b));
        result.distance = std::max(result.distance, d);
      }
      result.exact = result.exact && exact;
    }
  }
  return result;
}

}  // namespace pegs
