#pragma once

#include <string>

#include "pegs/game.hpp"
#include "pegs/solver.hpp"
#include "pegs/value_function.hpp"

namespace pegs::io {

// Input problems carry a human-readable location ("file:line:col" for JSON
// syntax, "file: key ..." for semantic issues).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSON instance document. Keys: vertices, edges, directed (default false),
// self_loops, n_units, gamma, pursuer_start, belief (list or "uniform_off").
GameInstance parse_instance(const std::string& text, const std::string& name = "<string>");
GameInstance load_instance(const std::string& path);

std::string read_file(const std::string& path);

// FNV-1a over the raw instance bytes; ties a solution file to its input.
std::string digest(const std::string& bytes);

struct SolutionFile {
  std::string instance_digest;
  double gamma = 0.0;
  int vertex_count = 0;
  int iterations = 0;
  double residual = 0.0;
  double bound = 0.0;
  bool exact_norm = true;
  ValueFunction value_function;
};

// Line-oriented text with 17-significant-digit decimals: values round-trip
// bit-exactly through save and load.
void save_solution(const std::string& path, const SolutionFile& solution);
SolutionFile load_solution(const std::string& path);

SolutionFile make_solution(const SolveReport& report, const std::string& instance_digest,
                           int vertex_count);

// One line per iteration: "t residual gamma^t wall_ms".
void save_trace(const std::string& path, const SolveReport& report);

}  // namespace pegs::io
