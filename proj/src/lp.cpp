#include "pegs/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pegs::lp {

int LinearProgram::add_variable(double objective, double lower, double upper) {
  if (!(lower == 0.0 || lower == -kInfinity)) {
    throw std::invalid_argument("lp: variable lower bound must be 0 or -inf");
  }
  objective_.push_back(objective);
  lower_.push_back(lower);
  upper_.push_back(upper);
  return variable_count() - 1;
}

int LinearProgram::add_row(RowType type, double rhs) {
  row_type_.push_back(type);
  rhs_.push_back(rhs);
  row_entries_.emplace_back();
  return row_count() - 1;
}

void LinearProgram::set_coeff(int row, int var, double value) {
  row_entries_.at(row).emplace_back(var, value);
}

namespace {

constexpr double kTolReduced = 1e-9;   // optimality
constexpr double kTolPivot = 1e-9;     // smallest acceptable pivot element
constexpr double kTolFeas = 1e-9;      // phase-1 infeasibility threshold
constexpr int kDegenerateRun = 64;     // consecutive degenerate pivots before Bland

}  // namespace

// Full-tableau two-phase simplex. Free variables are split into a positive
// and a negative part; finite upper bounds become internal rows. Artificial
// columns stay in the tableau through phase 2 (barred from entering) so the
// duals of equality rows can be read off the objective row.
struct Simplex {
  const LinearProgram& lp;
  int n_user_rows = 0;
  int m = 0;       // internal rows
  int ncols = 0;   // structural + slack/surplus + artificial
  std::vector<std::vector<double>> tab;  // m x (ncols + 1), last column = rhs
  std::vector<double> obj1, obj2;        // objective rows: z_j - c_j, value at [ncols]
  std::vector<int> basis;
  std::vector<char> is_artificial;
  std::vector<int> col_of_var;      // first structural column of each user variable
  std::vector<char> var_is_split;
  std::vector<int> slack_col;       // per internal row, -1 if none
  std::vector<int> art_col;         // per internal row, -1 if none
  std::vector<char> row_flipped;    // rhs sign normalization
  std::vector<double> c2;           // phase-2 column costs (maximization)
  int degenerate_run = 0;
  bool bland = false;

  explicit Simplex(const LinearProgram& p) : lp(p) { build(); }

  void build() {
    n_user_rows = lp.row_count();
    const int nv = lp.variable_count();
    const double obj_sign = lp.sense_ == Sense::kMaximize ? 1.0 : -1.0;

    // Structural columns.
    col_of_var.resize(nv);
    var_is_split.assign(nv, 0);
    int next = 0;
    for (int j = 0; j < nv; ++j) {
      col_of_var[j] = next;
      if (lp.lower_[j] == -kInfinity) {
        var_is_split[j] = 1;
        next += 2;
      } else {
        next += 1;
      }
    }
    const int n_struct = next;

    // Internal rows: user rows plus one per finite upper bound.
    struct RowSpec {
      RowType type;
      double rhs;
    };
    std::vector<RowSpec> rows;
    rows.reserve(n_user_rows);
    for (int i = 0; i < n_user_rows; ++i) rows.push_back({lp.row_type_[i], lp.rhs_[i]});
    std::vector<std::pair<int, double>> bound_rows;  // (var, ub)
    for (int j = 0; j < nv; ++j) {
      if (lp.upper_[j] != kInfinity) {
        bound_rows.emplace_back(j, lp.upper_[j]);
        rows.push_back({RowType::kLe, lp.upper_[j]});
      }
    }
    m = static_cast<int>(rows.size());

    // Dense row coefficients over structural columns.
    std::vector<std::vector<double>> dense(m, std::vector<double>(n_struct, 0.0));
    for (int i = 0; i < n_user_rows; ++i) {
      for (const auto& [var, coeff] : lp.row_entries_[i]) {
        dense[i][col_of_var[var]] += coeff;
        if (var_is_split[var]) dense[i][col_of_var[var] + 1] -= coeff;
      }
    }
    for (size_t k = 0; k < bound_rows.size(); ++k) {
      const int var = bound_rows[k].first;
      dense[n_user_rows + k][col_of_var[var]] += 1.0;
      if (var_is_split[var]) dense[n_user_rows + k][col_of_var[var] + 1] -= 1.0;
    }

    // Normalize rhs >= 0, then lay out slack/surplus and artificial columns.
    row_flipped.assign(m, 0);
    slack_col.assign(m, -1);
    art_col.assign(m, -1);
    int extra = 0;
    for (int i = 0; i < m; ++i) {
      RowType t = rows[i].type;
      if (rows[i].rhs < 0.0) {
        rows[i].rhs = -rows[i].rhs;
        for (double& v : dense[i]) v = -v;
        row_flipped[i] = 1;
        if (t == RowType::kLe) t = RowType::kGe;
        else if (t == RowType::kGe) t = RowType::kLe;
        rows[i].type = t;
      }
      if (t == RowType::kLe || t == RowType::kGe) ++extra;          // slack / surplus
      if (t == RowType::kGe || t == RowType::kEq) ++extra;          // artificial
    }
    ncols = n_struct + extra;

    tab.assign(m, std::vector<double>(ncols + 1, 0.0));
    is_artificial.assign(ncols, 0);
    basis.assign(m, -1);
    int col = n_struct;
    for (int i = 0; i < m; ++i) {
      std::copy(dense[i].begin(), dense[i].end(), tab[i].begin());
      tab[i][ncols] = rows[i].rhs;
      switch (rows[i].type) {
        case RowType::kLe:
          tab[i][col] = 1.0;
          slack_col[i] = col;
          basis[i] = col++;
          break;
        case RowType::kGe:
          tab[i][col] = -1.0;
          slack_col[i] = col++;
          tab[i][col] = 1.0;
          art_col[i] = col;
          is_artificial[col] = 1;
          basis[i] = col++;
          break;
        case RowType::kEq:
          tab[i][col] = 1.0;
          art_col[i] = col;
          is_artificial[col] = 1;
          basis[i] = col++;
          break;
      }
    }

    // Phase-2 costs (always maximize internally).
    c2.assign(ncols, 0.0);
    for (int j = 0; j < nv; ++j) {
      const double c = obj_sign * lp.objective_[j];
      c2[col_of_var[j]] += c;
      if (var_is_split[j]) c2[col_of_var[j] + 1] -= c;
    }

    // Objective rows store z_j - c_j; initialize by pricing out the basis.
    obj1.assign(ncols + 1, 0.0);
    obj2.assign(ncols + 1, 0.0);
    for (int j = 0; j < ncols; ++j) {
      if (is_artificial[j]) obj1[j] = 1.0;  // phase-1 cost: maximize -sum(artificials)
      obj2[j] = -c2[j];
    }
    for (int i = 0; i < m; ++i) {
      if (is_artificial[basis[i]]) {
        for (int j = 0; j <= ncols; ++j) obj1[j] -= tab[i][j];
      }
      // Slack-started rows have zero phase-2 cost; nothing to price out there.
    }
  }

  void pivot(std::vector<double>& objrow, std::vector<double>* other, int r, int s) {
    const double inv = 1.0 / tab[r][s];
    for (int j = 0; j <= ncols; ++j) tab[r][j] *= inv;
    tab[r][s] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      const double f = tab[i][s];
      if (f == 0.0) continue;
      for (int j = 0; j <= ncols; ++j) tab[i][j] -= f * tab[r][j];
      tab[i][s] = 0.0;
    }
    const double fo = objrow[s];
    if (fo != 0.0) {
      for (int j = 0; j <= ncols; ++j) objrow[j] -= fo * tab[r][j];
      objrow[s] = 0.0;
    }
    if (other) {
      const double f2 = (*other)[s];
      if (f2 != 0.0) {
        for (int j = 0; j <= ncols; ++j) (*other)[j] -= f2 * tab[r][j];
        (*other)[s] = 0.0;
      }
    }
    basis[r] = s;
  }

  // Entering column: most negative z_j - c_j (lowest index on ties), or the
  // lowest negative index once Bland's rule is active. Returns -1 at optimum.
  int entering(const std::vector<double>& objrow, bool allow_artificial,
               const std::vector<char>& banned) const {
    int best = -1;
    double best_val = -kTolReduced;
    for (int j = 0; j < ncols; ++j) {
      if (banned[j] || (!allow_artificial && is_artificial[j])) continue;
      const double v = objrow[j];
      if (v < best_val) {
        if (bland) return j;
        best_val = v;
        best = j;
      }
    }
    return best;
  }

  // Two-pass ratio test: find the minimum ratio, then among rows within a
  // relative band of it pick the largest pivot element (numerically safest),
  // preferring artificial basics and lower basis indices on ties. Under
  // Bland's rule the lowest basis index decides alone. Returns -1 when the
  // column has no eligible entry.
  int leaving(int s) const {
    // Eligibility is relative to the column scale: pivoting on an entry many
    // orders below its column maximum amplifies the whole tableau by the
    // reciprocal and snowballs.
    double col_max = 0.0;
    for (int i = 0; i < m; ++i) col_max = std::max(col_max, tab[i][s]);
    const double eligible = std::max(kTolPivot, 1e-6 * col_max);

    bool found = false;
    double min_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      const double a = tab[i][s];
      if (a <= eligible) continue;
      const double ratio = tab[i][ncols] / a;
      if (!found || ratio < min_ratio) {
        found = true;
        min_ratio = ratio;
      }
    }
    if (!found) return -1;
    // Bland's anti-cycling needs the exact minimum-ratio tie set; otherwise
    // a relative band lets the numerically largest pivot win.
    const double band =
        bland ? min_ratio : min_ratio + 1e-9 * (1.0 + std::abs(min_ratio));

    int best = -1;
    for (int i = 0; i < m; ++i) {
      const double a = tab[i][s];
      if (a <= eligible || tab[i][ncols] / a > band) continue;
      if (best < 0) {
        best = i;
        continue;
      }
      bool take;
      if (bland) {
        take = basis[i] < basis[best];
      } else if (tab[i][s] != tab[best][s]) {
        take = tab[i][s] > tab[best][s];
      } else {
        const bool cand_art = is_artificial[basis[i]];
        const bool best_art = is_artificial[basis[best]];
        take = cand_art != best_art ? cand_art : basis[i] < basis[best];
      }
      if (take) best = i;
    }
    return best;
  }

  // Runs one phase to optimality. Returns false on unboundedness. A column
  // whose reduced cost sits in the noise band but has no leaving row is
  // skipped rather than declared an unbounded ray; in phase 1 the objective
  // is bounded by construction, so any such column is roundoff.
  bool run(std::vector<double>& objrow, std::vector<double>* other, bool phase1) {
    const long long cap = 10000 + 50LL * (m + ncols);
    degenerate_run = 0;
    bland = false;
    std::vector<char> banned(ncols, 0);
    for (long long it = 0; it < cap; ++it) {
      std::fill(banned.begin(), banned.end(), 0);
      int r = -1, s = -1;
      while (true) {
        s = entering(objrow, phase1, banned);
        if (s < 0) return true;
        r = leaving(s);
        if (r >= 0) break;
        if (!phase1 && objrow[s] < -1e-7) {
          // A genuine ray has a clean all-nonpositive column; entries that
          // merely eroded below the pivot tolerance are treated as noise.
          double max_entry = 0.0;
          for (int i = 0; i < m; ++i) max_entry = std::max(max_entry, tab[i][s]);
          if (max_entry <= 1e-11) return false;
        }
        banned[s] = 1;
      }
      const bool degenerate = tab[r][ncols] <= kTolPivot;
      pivot(objrow, other, r, s);
      if (degenerate) {
        if (++degenerate_run >= kDegenerateRun) bland = true;  // sticky per phase
      } else {
        degenerate_run = 0;
      }
    }
    throw std::runtime_error("lp: simplex iteration limit exceeded");
  }

  Solution run_all() {
    Solution out;
    bool has_artificial_basis = false;
    for (int i = 0; i < m; ++i) has_artificial_basis |= (art_col[i] == basis[i]);

    if (has_artificial_basis) {
      run(obj1, &obj2, /*phase1=*/true);  // phase 1 cannot be unbounded
      // obj1[ncols] is the phase-1 value max(-sum of artificials) <= 0.
      if (obj1[ncols] < -kTolFeas) {
        out.status = Status::kInfeasible;
        return out;
      }
      // Drive leftover zero-valued artificials out of the basis when a sane
      // pivot exists; rows without one are redundant and stay inert.
      for (int i = 0; i < m; ++i) {
        if (!is_artificial[basis[i]]) continue;
        for (int j = 0; j < ncols; ++j) {
          if (!is_artificial[j] && std::abs(tab[i][j]) > 1e-7) {
            pivot(obj1, &obj2, i, j);
            break;
          }
        }
      }
    }

    if (!run(obj2, nullptr, false)) {
      out.status = Status::kUnbounded;
      return out;
    }

    out.status = Status::kOptimal;
    const double obj_sign = lp.sense_ == Sense::kMaximize ? 1.0 : -1.0;
    out.objective = obj_sign * obj2[ncols];

    std::vector<double> colval(ncols, 0.0);
    for (int i = 0; i < m; ++i) colval[basis[i]] = tab[i][ncols];
    out.primal.resize(lp.variable_count());
    for (int j = 0; j < lp.variable_count(); ++j) {
      double v = colval[col_of_var[j]];
      if (var_is_split[j]) v -= colval[col_of_var[j] + 1];
      out.primal[j] = v;
    }

    out.duals.resize(n_user_rows);
    for (int i = 0; i < n_user_rows; ++i) {
      double y;
      if (art_col[i] >= 0) {
        y = obj2[art_col[i]];  // artificial cost is zero in phase 2
      } else {
        y = obj2[slack_col[i]];
      }
      if (row_flipped[i]) y = -y;
      out.duals[i] = obj_sign * y;
    }
    return out;
  }
};

Solution solve(const LinearProgram& lp) {
  Simplex simplex(lp);
  return simplex.run_all();
}

}  // namespace pegs::lp
