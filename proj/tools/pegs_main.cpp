#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pegs/backup.hpp"
#include "pegs/efg_oracle.hpp"
#include "pegs/io.hpp"
#include "pegs/simulate.hpp"
#include "pegs/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitNumericFailure = 3;

pegs::QMode parse_q_mode(const std::string& s) {
  if (s == "auto") return pegs::QMode::kAuto;
  if (s == "full") return pegs::QMode::kFull;
  if (s == "point") return pegs::QMode::kPoint;
  throw pegs::io::ParseError("--q-mode must be auto, full or point");
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::string token;
  for (char c : s + ",") {
    if (c == ',') {
      if (!token.empty()) out.push_back(std::stoi(token));
      token.clear();
    } else {
      token += c;
    }
  }
  if (out.empty()) throw pegs::io::ParseError("empty list: '" + s + "'");
  return out;
}

pegs::Belief parse_belief(const std::string& s, const pegs::PursuerPosition& pos,
                          int vertex_count) {
  if (s == "uniform_off") return pegs::Belief::uniform_off(pos, vertex_count);
  std::vector<double> mass;
  std::string token;
  for (char c : s + ",") {
    if (c == ',') {
      if (!token.empty()) mass.push_back(std::stod(token));
      token.clear();
    } else {
      token += c;
    }
  }
  if (static_cast<int>(mass.size()) != vertex_count) {
    throw pegs::io::ParseError("belief must list exactly " +
                               std::to_string(vertex_count) + " reals");
  }
  return pegs::Belief(std::move(mass));
}

void check_digest(const std::string& instance_path, const pegs::io::SolutionFile& solution) {
  const std::string actual = pegs::io::digest(pegs::io::read_file(instance_path));
  if (actual != solution.instance_digest) {
    throw pegs::io::ParseError("solution file digest " + solution.instance_digest +
                               " does not match instance digest " + actual +
                               "; refusing to answer");
  }
}

int cmd_solve(const std::string& instance_path, double eps, int max_iters,
              const std::string& q_mode, int threads, const std::string& out_path,
              std::string trace_path) {
  const std::string bytes = pegs::io::read_file(instance_path);
  pegs::GameInstance instance = pegs::io::parse_instance(bytes, instance_path);

  pegs::SolveOptions opts;
  opts.target_eps = eps;
  opts.max_iters = max_iters;
  opts.backup.q_mode = parse_q_mode(q_mode);
  opts.backup.threads = threads;
  pegs::SolveReport report = pegs::value_iteration(instance, opts);

  pegs::io::save_solution(out_path, pegs::io::make_solution(
                                        report, pegs::io::digest(bytes),
                                        instance.graph.vertex_count()));
  if (trace_path.empty()) trace_path = out_path + ".trace";
  pegs::io::save_trace(trace_path, report);

  const double value =
      pegs::value_at(report, instance.initial_position, instance.initial_belief);
  std::printf("iterations %d\nresidual %.10e\nbound %.10e\nvalue %.17g\nconverged %d\n",
              report.iterations,
              report.residuals.empty() ? 0.0 : report.residuals.back(), report.bound,
              value, report.converged ? 1 : 0);
  return report.converged ? kExitOk : kExitNotConverged;
}

int cmd_value(const std::string& instance_path, const std::string& solution_path,
              const std::string& position_arg, const std::string& belief_arg) {
  pegs::io::SolutionFile solution = pegs::io::load_solution(solution_path);
  check_digest(instance_path, solution);
  pegs::PursuerPosition position(parse_int_list(position_arg));
  pegs::Belief belief = parse_belief(belief_arg, position, solution.vertex_count);
  const double value = pegs::evaluate(solution.value_function.at(position), belief);
  std::printf("%.17g\n", value);
  return kExitOk;
}

int cmd_oracle_check(const std::string& instance_path, int horizon, int samples,
                     std::uint64_t seed) {
  if (horizon < 1) throw pegs::io::ParseError("--t must be at least 1");
  pegs::GameInstance instance = pegs::io::load_instance(instance_path);
  const int n = instance.graph.vertex_count();

  std::vector<int> support(n);
  for (int v = 0; v < n; ++v) support[v] = v;
  pegs::Efg efg(instance, horizon, support);

  pegs::ValueFunction vt = pegs::horizon_zero(instance);
  for (int t = 0; t < horizon; ++t) vt = pegs::apply_H(vt, instance);

  std::mt19937_64 rng(seed);
  auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> mass(n);
    double total = 0.0;
    for (double& x : mass) {
      x = -std::log(unit() + 1e-300);
      total += x;
    }
    for (double& x : mass) x /= total;
    pegs::Belief b(std::move(mass));
    const double dp = pegs::evaluate(vt.at(instance.initial_position), b);
    const double exact = efg.solve(b).value;
    worst = std::max(worst, std::abs(dp - exact));
  }
  std::printf("max deviation %.10e over %d beliefs at horizon %d\n", worst, samples,
              horizon);
  return worst <= 1e-6 ? kExitOk : kExitNumericFailure;
}

int cmd_simulate(const std::string& instance_path, const std::string& solution_path,
                 long long episodes, std::uint64_t seed, double tail,
                 const std::string& evader) {
  pegs::GameInstance instance = pegs::io::load_instance(instance_path);
  pegs::io::SolutionFile solution = pegs::io::load_solution(solution_path);
  check_digest(instance_path, solution);

  pegs::RolloutConfig config;
  config.episodes = episodes;
  config.seed = seed;
  config.tail_tolerance = tail;
  if (evader != "lp") config.evader = pegs::heuristic_evader(std::stoi(evader));

  pegs::RolloutStats stats = pegs::rollout(instance, solution.value_function, config);
  std::printf("episodes %lld\nmean %.10f\nstd_error %.10f\nuncaptured %lld\n",
              stats.episodes, stats.mean, stats.std_error, stats.uncaptured);
  std::printf("capture_histogram");
  for (size_t i = 0; i < stats.capture_histogram.size() && i < 16; ++i) {
    std::printf(" %lld", stats.capture_histogram[i]);
  }
  std::printf("\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pegs: a pursuit-evasion game solver on graphs"};
  app.require_subcommand(1);

  std::string instance_path, solution_path, out_path = "solution.txt", trace_path;
  std::string q_mode = "auto", position_arg, belief_arg = "uniform_off", evader = "lp";
  double eps = 1e-3, tail = 1e-4;
  int max_iters = 1000, threads = 1, horizon = 1, samples = 64;
  long long episodes = 100000;
  std::uint64_t seed = 1;

  CLI::App* solve = app.add_subcommand("solve", "Run value iteration on an instance");
  solve->add_option("instance", instance_path, "instance file")->required();
  solve->add_option("--eps", eps,
                    "stop when min(gamma^t, inflated Cauchy residual) <= eps");
  solve->add_option("--max-iters", max_iters, "iteration cap");
  solve->add_option("--q-mode", q_mode, "auto, full or point");
  solve->add_option("--threads", threads, "parallel positions per iteration");
  solve->add_option("--out", out_path, "solution file path");
  solve->add_option("--trace", trace_path, "trace file path (default: <out>.trace)");

  CLI::App* value = app.add_subcommand("value", "Evaluate a solved value function");
  value->add_option("instance", instance_path, "instance file")->required();
  value->add_option("solution", solution_path, "solution file")->required();
  value->add_option("--position", position_arg, "pursuer vertices, comma separated")
      ->required();
  value->add_option("--belief", belief_arg, "comma-separated reals or uniform_off");

  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "Compare value iteration against the exact finite-horizon game");
  oracle->add_option("instance", instance_path, "instance file")->required();
  oracle->add_option("--t", horizon, "horizon (>= 1)");
  oracle->add_option("--samples", samples, "number of sampled beliefs");
  oracle->add_option("--seed", seed, "belief sampling seed");

  CLI::App* simulate = app.add_subcommand("simulate", "Roll out the solved strategies");
  simulate->add_option("instance", instance_path, "instance file")->required();
  simulate->add_option("solution", solution_path, "solution file")->required();
  simulate->add_option("--episodes", episodes, "episode count");
  simulate->add_option("--seed", seed, "rollout seed");
  simulate->add_option("--tail", tail, "discount tail tolerance (sets the horizon cap)");
  simulate->add_option("--evader", evader, "lp or a heuristic index 0-7");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      return cmd_solve(instance_path, eps, max_iters, q_mode, threads, out_path,
                       trace_path);
    }
    if (value->parsed()) {
      return cmd_value(instance_path, solution_path, position_arg, belief_arg);
    }
    if (oracle->parsed()) {
      return cmd_oracle_check(instance_path, horizon, samples, seed);
    }
    if (simulate->parsed()) {
      return cmd_simulate(instance_path, solution_path, episodes, seed, tail, evader);
    }
  } catch (const pegs::io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumericFailure;
  }
  return kExitInputError;
}
