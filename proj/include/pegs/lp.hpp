#pragma once

#include <limits>
#include <vector>

namespace pegs::lp {

enum class Sense { kMaximize, kMinimize };
enum class RowType { kLe, kEq, kGe };
enum class Status { kOptimal, kInfeasible, kUnbounded };

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Dense linear program. Variables default to [0, +inf); a lower bound of
// -inf makes the variable free. Rows are built sparsely and densified at
// solve time.
class LinearProgram {
 public:
  explicit LinearProgram(Sense sense) : sense_(sense) {}

  int add_variable(double objective, double lower = 0.0, double upper = kInfinity);
  int add_row(RowType type, double rhs);
  void set_coeff(int row, int var, double value);

  Sense sense() const { return sense_; }
  int variable_count() const { return static_cast<int>(objective_.size()); }
  int row_count() const { return static_cast<int>(row_type_.size()); }

 private:
  friend struct Simplex;
  Sense sense_;
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<RowType> row_type_;
  std::vector<double> rhs_;
  std::vector<std::vector<std::pair<int, double>>> row_entries_;
};

struct Solution {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> primal;  // one entry per variable
  std::vector<double> duals;   // one entry per row; duals . rhs == objective at optimum
};

// Two-phase dense simplex. Deterministic: Dantzig pricing with lowest-index
// tie-breaking, switching to Bland's rule after a run of degenerate pivots.
Solution solve(const LinearProgram& lp);

}  // namespace pegs::lp
