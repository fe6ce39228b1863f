// End-to-end checks of the pegs binary. The test runner provides PEGS_BIN
// (binary path) and PEGS_SRC (repository root) in the environment.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  const char* bin = std::getenv("PEGS_BIN");
  REQUIRE(bin != nullptr);
  const std::string cmd = std::string(bin) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  std::array<char, 512> buffer;
  while (fgets(buffer.data(), buffer.size(), pipe)) output += buffer.data();
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

std::string src_path(const std::string& rel) {
  const char* src = std::getenv("PEGS_SRC");
  REQUIRE(src != nullptr);
  return std::string(src) + "/" + rel;
}

double printed_value(const std::string& output, const std::string& key) {
  const size_t at = output.find(key + " ");
  REQUIRE(at != std::string::npos);
  return std::stod(output.substr(at + key.size() + 1));
}

}  // namespace

TEST_CASE("solve help documents the stopping rule") {
  RunResult r = run("solve --help");
  CHECK(r.output.find("stop when min(gamma^t, inflated Cauchy residual) <= eps") !=
        std::string::npos);
}

TEST_CASE("solve converges on the triangle and reports the fixed point") {
  RunResult r = run("solve " + src_path("instances/triangle.json") +
                    " --eps 1e-3 --out /tmp/pegs_cli_triangle.txt");
  CHECK(r.exit_code == 0);
  CHECK(std::abs(printed_value(r.output, "value") - 0.75) <= 1e-3);

  std::ifstream trace("/tmp/pegs_cli_triangle.txt.trace");
  CHECK(trace.good());
}

TEST_CASE("eps 1 stops after a single iteration with horizon-1 values") {
  RunResult r = run("solve " + src_path("instances/triangle.json") +
                    " --eps 1 --out /tmp/pegs_cli_eps1.txt");
  CHECK(r.exit_code == 0);
  CHECK(printed_value(r.output, "iterations") == 1.0);
  CHECK(printed_value(r.output, "value") == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("max-iters exhaustion exits with code 2") {
  RunResult r = run("solve " + src_path("instances/triangle.json") +
                    " --eps 1e-9 --max-iters 2 --out /tmp/pegs_cli_short.txt");
  CHECK(r.exit_code == 2);
}

TEST_CASE("malformed input exits with code 1") {
  std::ofstream("/tmp/pegs_cli_bad.json")
      << R"({"vertices": 3, "edges": [[0,1],[0,2],[1,2]], "self_loops": [0,1,2],
           "n_units": 1, "gamma": 0.9, "pursuer_start": [0], "belief": [0.5, 0.5]})";
  RunResult r = run("solve /tmp/pegs_cli_bad.json");
  CHECK(r.exit_code == 1);
  RunResult missing = run("solve /tmp/no_such_instance.json");
  CHECK(missing.exit_code == 1);
}

TEST_CASE("value queries use the solution file and verify the digest") {
  run("solve " + src_path("instances/triangle.json") +
      " --eps 1e-3 --out /tmp/pegs_cli_value.txt");

  RunResult caught = run("value " + src_path("instances/triangle.json") +
                         " /tmp/pegs_cli_value.txt --position 0 --belief 1,0,0");
  CHECK(caught.exit_code == 0);
  CHECK(std::stod(caught.output) == doctest::Approx(1.0));

  RunResult off = run("value " + src_path("instances/triangle.json") +
                      " /tmp/pegs_cli_value.txt --position 0 --belief uniform_off");
  CHECK(off.exit_code == 0);
  CHECK(std::abs(std::stod(off.output) - 0.75) <= 1e-3);

  // Same graph, different file contents: the digest must not match.
  RunResult mismatch = run("value " + src_path("instances/path3.json") +
                           " /tmp/pegs_cli_value.txt --position 0 --belief uniform_off");
  CHECK(mismatch.exit_code == 1);
}

TEST_CASE("value handles multi-unit positions and rejects unknown ones") {
  std::ofstream("/tmp/pegs_cli_pair.json") << R"({
    "vertices": 3,
    "edges": [[0, 1], [0, 2], [1, 2]],
    "self_loops": [0, 1, 2],
    "n_units": 2,
    "gamma": 0.9,
    "pursuer_start": [0, 1],
    "belief": "uniform_off"
  })";
  RunResult solved =
      run("solve /tmp/pegs_cli_pair.json --eps 1e-3 --out /tmp/pegs_cli_pair_sol.txt");
  REQUIRE(solved.exit_code == 0);
  // Two units on the triangle: u = gamma*(2/3 + u/3) = 6/7.
  CHECK(std::abs(printed_value(solved.output, "value") - 6.0 / 7.0) <= 1e-3);

  RunResult query = run(
      "value /tmp/pegs_cli_pair.json /tmp/pegs_cli_pair_sol.txt"
      " --position 0,1 --belief 0,0,1");
  CHECK(query.exit_code == 0);
  CHECK(std::abs(std::stod(query.output) - 6.0 / 7.0) <= 1e-3);

  RunResult unknown = run(
      "value /tmp/pegs_cli_pair.json /tmp/pegs_cli_pair_sol.txt"
      " --position 9 --belief 0,0,1");
  CHECK(unknown.exit_code == 1);
}

TEST_CASE("oracle-check validates horizons and passes on the suite instances") {
  RunResult bad = run("oracle-check " + src_path("instances/triangle.json") + " --t 0");
  CHECK(bad.exit_code == 1);

  RunResult k3 = run("oracle-check " + src_path("instances/triangle.json") +
                     " --t 1 --samples 32 --seed 3");
  CHECK(k3.exit_code == 0);

  RunResult cycle = run("oracle-check " + src_path("instances/cycle4.json") +
                        " --t 2 --samples 16 --seed 5");
  CHECK(cycle.exit_code == 0);

  RunResult pendant = run("oracle-check " + src_path("instances/pendant4.json") +
                          " --t 2 --samples 64 --seed 7");
  CHECK(pendant.exit_code == 0);
}

TEST_CASE("simulate reports rollout statistics") {
  run("solve " + src_path("instances/triangle.json") +
      " --eps 1e-3 --out /tmp/pegs_cli_sim.txt");
  RunResult r = run("simulate " + src_path("instances/triangle.json") +
                    " /tmp/pegs_cli_sim.txt --episodes 5000 --seed 11");
  CHECK(r.exit_code == 0);
  const double mean = printed_value(r.output, "mean");
  CHECK(std::abs(mean - 0.75) <= 0.02);

  RunResult again = run("simulate " + src_path("instances/triangle.json") +
                        " /tmp/pegs_cli_sim.txt --episodes 5000 --seed 11");
  CHECK(again.output == r.output);  // deterministic under fixed flags
}
