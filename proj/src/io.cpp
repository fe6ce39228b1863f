#include "pegs/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pegs::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& name, const std::string& message) {
  throw ParseError(name + ": " + message);
}

std::pair<int, int> line_col(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

const json& require(const json& doc, const char* key, const std::string& name) {
  auto it = doc.find(key);
  if (it == doc.end()) fail(name, std::string("missing key '") + key + "'");
  return *it;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

GameInstance parse_instance(const std::string& text, const std::string& name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream os;
    os << name << ":" << line << ":" << col << ": " << e.what();
    throw ParseError(os.str());
  }
  if (!doc.is_object()) fail(name, "top level must be an object");

  static const char* kKnown[] = {"vertices", "edges",         "directed", "self_loops",
                                 "n_units",  "gamma",         "pursuer_start", "belief"};
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* k : kKnown) known |= key == k;
    if (!known) fail(name, "unknown key '" + key + "'");
    (void)value;
  }

  const json& jv = require(doc, "vertices", name);
  if (!jv.is_number_integer() || jv.get<int>() <= 0) {
    fail(name, "'vertices' must be a positive integer");
  }
  const int vertices = jv.get<int>();

  std::vector<std::pair<int, int>> edges;
  const json& je = require(doc, "edges", name);
  if (!je.is_array()) fail(name, "'edges' must be a list of [u, v] pairs");
  for (const auto& e : je) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer()) {
      fail(name, "'edges' entries must be [u, v] integer pairs");
    }
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }

  bool directed = false;
  if (doc.contains("directed")) {
    if (!doc["directed"].is_boolean()) fail(name, "'directed' must be a boolean");
    directed = doc["directed"].get<bool>();
  }

  std::vector<int> self_loops;
  if (doc.contains("self_loops")) {
    const json& jl = doc["self_loops"];
    if (!jl.is_array()) fail(name, "'self_loops' must be a list of vertices");
    for (const auto& v : jl) {
      if (!v.is_number_integer()) fail(name, "'self_loops' entries must be integers");
      self_loops.push_back(v.get<int>());
    }
  }

  const json& jn = require(doc, "n_units", name);
  if (!jn.is_number_integer() || jn.get<int>() < 1) {
    fail(name, "'n_units' must be an integer >= 1");
  }
  const int n_units = jn.get<int>();

  const json& jg = require(doc, "gamma", name);
  if (!jg.is_number()) fail(name, "'gamma' must be a number");
  const double gamma = jg.get<double>();
  if (!(gamma >= 0.0 && gamma < 1.0)) fail(name, "'gamma' must lie in [0, 1)");

  const json& jp = require(doc, "pursuer_start", name);
  if (!jp.is_array() || static_cast<int>(jp.size()) != n_units) {
    fail(name, "'pursuer_start' must list exactly n_units vertices");
  }
  std::vector<int> start;
  for (const auto& v : jp) {
    if (!v.is_number_integer()) fail(name, "'pursuer_start' entries must be integers");
    start.push_back(v.get<int>());
  }

  try {
    Graph graph(vertices, edges, !directed, self_loops);
    PursuerPosition position(start);

    const json& jb = require(doc, "belief", name);
    std::vector<double> mass;
    if (jb.is_string()) {
      if (jb.get<std::string>() != "uniform_off") {
        fail(name, "'belief' must be a list of reals or the keyword \"uniform_off\"");
      }
      return GameInstance::make(std::move(graph), n_units, gamma, position,
                                Belief::uniform_off(position, vertices));
    }
    if (!jb.is_array() || static_cast<int>(jb.size()) != vertices) {
      std::ostringstream os;
      os << "'belief' must list exactly " << vertices << " reals";
      fail(name, os.str());
    }
    for (const auto& x : jb) {
      if (!x.is_number()) fail(name, "'belief' entries must be numbers");
      mass.push_back(x.get<double>());
    }
    return GameInstance::make(std::move(graph), n_units, gamma, std::move(position),
                              Belief(std::move(mass)));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(name, e.what());
  }
}

GameInstance load_instance(const std::string& path) {
  return parse_instance(read_file(path), path);
}

namespace {

void write_double(std::ostream& os, double x) {
  char buf[40];
  snprintf(buf, sizeof buf, "%.16e", x);
  os << buf;
}

}  // namespace

void save_solution(const std::string& path, const SolutionFile& solution) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error(path + ": cannot write file");
  os << "pegs-solution 1\n";
  os << "digest " << solution.instance_digest << "\n";
  os << "vertices " << solution.vertex_count << "\n";
  os << "gamma ";
  write_double(os, solution.gamma);
  os << "\niterations " << solution.iterations << "\n";
  os << "residual ";
  write_double(os, solution.residual);
  os << "\nbound ";
  write_double(os, solution.bound);
  os << "\nexact_norm " << (solution.exact_norm ? 1 : 0) << "\n";
  os << "positions " << solution.value_function.position_count() << "\n";
  for (const auto& [pos, set] : solution.value_function.sets()) {
    os << "position";
    for (int v : pos.vertices()) os << ' ' << v;
    os << "\nalphas " << set.size() << "\n";
    for (const AlphaVector& alpha : set) {
      for (size_t i = 0; i < alpha.values.size(); ++i) {
        if (i) os << ' ';
        write_double(os, alpha.values[i]);
      }
      os << "\n";
    }
  }
}

SolutionFile load_solution(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");

  auto expect = [&](const std::string& want) {
    std::string got;
    if (!(in >> got) || got != want) {
      throw ParseError(path + ": expected token '" + want + "'");
    }
  };

  SolutionFile out;
  expect("pegs-solution");
  int version = 0;
  in >> version;
  if (version != 1) throw ParseError(path + ": unsupported solution version");
  expect("digest");
  in >> out.instance_digest;
  expect("vertices");
  in >> out.vertex_count;
  expect("gamma");
  in >> out.gamma;
  expect("iterations");
  in >> out.iterations;
  expect("residual");
  in >> out.residual;
  expect("bound");
  in >> out.bound;
  expect("exact_norm");
  int exact = 0;
  in >> exact;
  out.exact_norm = exact != 0;
  expect("positions");
  int positions = 0;
  in >> positions;
  if (!in || out.vertex_count <= 0 || positions <= 0) {
    throw ParseError(path + ": malformed solution header");
  }

  for (int p = 0; p < positions; ++p) {
    expect("position");
    std::vector<int> vs;
    // Position vertices run until the "alphas" token; peek word by word.
    std::string token;
    while (in >> token) {
      if (token == "alphas") break;
      try {
        vs.push_back(std::stoi(token));
      } catch (const std::exception&) {
        throw ParseError(path + ": bad position vertex '" + token + "'");
      }
    }
    if (token != "alphas" || vs.empty()) {
      throw ParseError(path + ": malformed position block");
    }
    int count = 0;
    in >> count;
    if (!in || count <= 0) throw ParseError(path + ": bad alpha count");
    AlphaSet set;
    for (int a = 0; a < count; ++a) {
      std::vector<double> values(out.vertex_count);
      for (int v = 0; v < out.vertex_count; ++v) {
        if (!(in >> values[v])) throw ParseError(path + ": truncated alpha vector");
      }
      set.push_back(AlphaVector{std::move(values)});
    }
    out.value_function.set(PursuerPosition(std::move(vs)), std::move(set));
  }
  return out;
}

SolutionFile make_solution(const SolveReport& report, const std::string& instance_digest,
                           int vertex_count) {
  SolutionFile out;
  out.instance_digest = instance_digest;
  out.gamma = report.gamma;
  out.vertex_count = vertex_count;
  out.iterations = report.iterations;
  out.residual = report.residuals.empty() ? 0.0 : report.residuals.back();
  out.bound = report.bound;
  out.exact_norm = report.exact_norm;
  out.value_function = report.final;
  return out;
}

void save_trace(const std::string& path, const SolveReport& report) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error(path + ": cannot write file");
  double bound = 1.0;
  for (size_t k = 0; k < report.residuals.size(); ++k) {
    bound *= report.gamma;
    os << (k + 1) << ' ';
    write_double(os, report.residuals[k]);
    os << ' ';
    write_double(os, bound);
    os << ' ';
    write_double(os, report.wall_ms[k]);
    os << '\n';
  }
}

}  // namespace pegs::io
