#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pegs/backup.hpp"
#include "pegs/efg_oracle.hpp"
#include "pegs/io.hpp"
#include "pegs/simulate.hpp"
#include "pegs/solver.hpp"

namespace py = pybind11;
using namespace pegs;

namespace {

QMode q_mode_from(const std::string& s) {
  if (s == "auto") return QMode::kAuto;
  if (s == "full") return QMode::kFull;
  if (s == "point") return QMode::kPoint;
  throw std::invalid_argument("q_mode must be 'auto', 'full' or 'point'");
}

EvaderPolicy evader_from(const py::object& spec) {
  if (py::isinstance<py::str>(spec)) {
    if (spec.cast<std::string>() == "lp") return EvaderPolicy::kEquilibrium;
    throw std::invalid_argument("evader must be 'lp' or a heuristic index 0-7");
  }
  return heuristic_evader(spec.cast<int>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pursuit-evasion game solver on graphs";

  py::register_exception<io::ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Graph>(m, "Graph")
      .def(py::init<int, const std::vector<std::pair<int, int>>&, bool,
                    const std::vector<int>&>(),
           py::arg("vertex_count"), py::arg("edges"), py::arg("undirected") = true,
           py::arg("self_loops") = std::vector<int>{})
      .def_property_readonly("vertex_count", &Graph::vertex_count)
      .def("neighbors", &Graph::neighbors, py::arg("v"))
      .def("has_arc", &Graph::has_arc, py::arg("u"), py::arg("v"));

  py::class_<PursuerPosition>(m, "PursuerPosition")
      .def(py::init<std::vector<int>>(), py::arg("vertices"))
      .def_property_readonly("vertices", &PursuerPosition::vertices)
      .def("contains", &PursuerPosition::contains, py::arg("v"))
      .def("__repr__", &PursuerPosition::to_string)
      .def("__eq__", [](const PursuerPosition& a, const PursuerPosition& b) { return a == b; });

  py::class_<Belief>(m, "Belief")
      .def(py::init<std::vector<double>>(), py::arg("mass"))
      .def_static("point_mass", &Belief::point_mass, py::arg("v"), py::arg("vertex_count"))
      .def_static("uniform", &Belief::uniform, py::arg("support"), py::arg("vertex_count"))
      .def_static("uniform_off", &Belief::uniform_off, py::arg("position"),
                  py::arg("vertex_count"))
      .def_property_readonly("mass", &Belief::mass)
      .def("__getitem__", [](const Belief& b, int v) { return b[v]; })
      .def("__len__", &Belief::size);

  py::class_<EvaderStageStrategy>(m, "EvaderStageStrategy")
      .def(py::init<const Graph&, std::vector<std::vector<double>>>(), py::arg("graph"),
           py::arg("rows"))
      .def_static("uniform", &EvaderStageStrategy::uniform, py::arg("graph"))
      .def("row", &EvaderStageStrategy::row, py::arg("from_vertex"))
      .def("prob", &EvaderStageStrategy::prob, py::arg("from_vertex"), py::arg("to_vertex"));

  py::class_<GameInstance>(m, "GameInstance")
      .def(py::init(&GameInstance::make), py::arg("graph"), py::arg("n_units"),
           py::arg("gamma"), py::arg("initial_position"), py::arg("initial_belief"))
      .def_readonly("graph", &GameInstance::graph)
      .def_readonly("n_units", &GameInstance::n_units)
      .def_readonly("gamma", &GameInstance::gamma)
      .def_readonly("initial_position", &GameInstance::initial_position)
      .def_readonly("initial_belief", &GameInstance::initial_belief);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("converged", &SolveReport::converged)
      .def_readonly("bound", &SolveReport::bound)
      .def_readonly("exact_norm", &SolveReport::exact_norm)
      .def_readonly("residuals", &SolveReport::residuals)
      .def_readonly("gamma", &SolveReport::gamma)
      .def("value_at", &value_at, py::arg("position"), py::arg("belief"))
      .def("positions", [](const SolveReport& r) {
        std::vector<PursuerPosition> out;
        for (const auto& [pos, set] : r.final.sets()) out.push_back(pos);
        return out;
      });

  py::class_<RolloutStats>(m, "RolloutStats")
      .def_readonly("mean", &RolloutStats::mean)
      .def_readonly("std_error", &RolloutStats::std_error)
      .def_readonly("episodes", &RolloutStats::episodes)
      .def_readonly("uncaptured", &RolloutStats::uncaptured)
      .def_readonly("capture_histogram", &RolloutStats::capture_histogram);

  m.def("parse_instance", &io::parse_instance, py::arg("text"),
        py::arg("name") = "<string>");
  m.def("load_instance", &io::load_instance, py::arg("path"));

  m.def(
      "solve",
      [](const GameInstance& instance, double eps, int max_iters, int threads,
         const std::string& q_mode, bool use_cauchy) {
        SolveOptions opts;
        opts.target_eps = eps;
        opts.max_iters = max_iters;
        opts.use_cauchy = use_cauchy;
        opts.backup.threads = threads;
        opts.backup.q_mode = q_mode_from(q_mode);
        return value_iteration(instance, opts);
      },
      py::arg("instance"), py::arg("eps") = 1e-3, py::arg("max_iters") = 1000,
      py::arg("threads") = 1, py::arg("q_mode") = "auto", py::arg("use_cauchy") = true,
      "Run value iteration until the eps guarantee holds.");

  m.def(
      "oracle_value",
      [](const GameInstance& instance, int horizon, const Belief& belief) {
        return oracle_value(instance, horizon, belief);
      },
      py::arg("instance"), py::arg("horizon"), py::arg("belief"),
      "Exact finite-horizon value from the sequence-form game.");

  m.def(
      "rollout",
      [](const GameInstance& instance, const SolveReport& report, long long episodes,
         std::uint64_t seed, double tail, const py::object& evader) {
        RolloutConfig config;
        config.episodes = episodes;
        config.seed = seed;
        config.tail_tolerance = tail;
        config.evader = evader_from(evader);
        return rollout(instance, report.final, config);
      },
      py::arg("instance"), py::arg("report"), py::arg("episodes") = 100000,
      py::arg("seed") = 1, py::arg("tail") = 1e-4, py::arg("evader") = "lp",
      "Monte Carlo validation of the solved strategies.");

  m.def("expand_pursuer_moves", &expand_pursuer_moves, py::arg("graph"),
        py::arg("position"));
  m.def("transform_belief", &transform_belief, py::arg("graph"), py::arg("belief"),
        py::arg("evader_strategy"), py::arg("position"));
  m.def("condition_not_caught", &condition_not_caught, py::arg("belief"),
        py::arg("position"));
}
