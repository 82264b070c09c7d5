#include "config.h"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "tvcons/errors.h"

namespace tvcons::cli {

namespace {

[[noreturn]] void Fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::kConfig, path + ": " + what);
}

std::string Join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void RequireMap(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) Fail(path.empty() ? "<root>" : path, "expected a mapping");
}

void RejectUnknown(const YAML::Node& node, const std::string& path,
                   const std::set<std::string>& allowed) {
  RequireMap(node, path);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) Fail(Join(path, key), "unknown key");
  }
}

template <typename T>
T Scalar(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) Fail(path, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    Fail(path, "cannot convert '" + node.Scalar() + "'");
  }
}

template <typename T>
void Optional(const YAML::Node& parent, const std::string& key, const std::string& path,
              T* out) {
  if (parent[key]) *out = Scalar<T>(parent[key], Join(path, key));
}

MatrixXd Matrix(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence() || node.size() == 0) Fail(path, "expected a list of rows");
  const auto rows = static_cast<Eigen::Index>(node.size());
  Eigen::Index cols = -1;
  MatrixXd m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto row = node[i];
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!row.IsSequence()) Fail(rp, "expected a row list");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      if (cols == 0) Fail(rp, "empty row");
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      Fail(rp, "ragged row");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = Scalar<double>(row[j], rp + "[" + std::to_string(j) + "]");
    }
  }
  return m;
}

template <typename T>
std::vector<T> List(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) Fail(path, "expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(Scalar<T>(node[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::optional<std::string> OneOf(const YAML::Node& parent, const std::string& key,
                                 const std::string& path,
                                 const std::set<std::string>& choices) {
  if (!parent[key]) return std::nullopt;
  auto v = Scalar<std::string>(parent[key], Join(path, key));
  if (!choices.count(v)) {
    std::string list;
    for (const auto& c : choices) list += (list.empty() ? "" : "|") + c;
    Fail(Join(path, key), "expected one of " + list + ", got '" + v + "'");
  }
  return v;
}

void ParseGain(const YAML::Node& g, ExperimentConfig* c) {
  const std::string p = "gain";
  RejectUnknown(g, p, {"mode", "gamma", "eps_gamma", "enforce_bounds", "F", "tol_are"});
  const auto mode = OneOf(g, "mode", p, {"stable", "unstable", "explicit"});
  if (!mode) Fail("gain.mode", "missing");
  if (*mode == "stable") {
    c->mode = GainMode::kStable;
  } else if (*mode == "unstable") {
    c->mode = GainMode::kUnstable;
    if (!g["gamma"] || !g["eps_gamma"]) Fail(p, "unstable mode needs gamma and eps_gamma");
  } else {
    c->mode = GainMode::kExplicit;
    if (!g["F"]) Fail(p, "explicit mode needs F");
    c->F = Matrix(g["F"], "gain.F");
  }
  Optional(g, "gamma", p, &c->gamma);
  Optional(g, "eps_gamma", p, &c->eps_gamma);
  Optional(g, "enforce_bounds", p, &c->enforce_bounds);
  Optional(g, "tol_are", p, &c->tol_are);
}

ScheduleKind KindFromString(const std::string& s) {
  if (s == "constant") return ScheduleKind::kConstant;
  if (s == "periodic") return ScheduleKind::kPeriodic;
  if (s == "dwell") return ScheduleKind::kDwellSwitched;
  if (s == "random") return ScheduleKind::kRandomUniform;
  if (s == "sparse") return ScheduleKind::kSparse;
  return ScheduleKind::kCustom;
}

void ParseGraph(const YAML::Node& g, ExperimentConfig* c) {
  const std::string p = "graph";
  RejectUnknown(g, p, {"agents", "palette", "schedule", "basis"});
  if (!g["agents"]) Fail("graph.agents", "missing");
  c->agents = Scalar<int>(g["agents"], "graph.agents");
  if (c->agents < 2) Fail("graph.agents", "need at least 2 agents");
  if (!g["palette"] || !g["palette"].IsSequence() || g["palette"].size() == 0) {
    Fail("graph.palette", "expected a non-empty list");
  }
  for (std::size_t i = 0; i < g["palette"].size(); ++i) {
    const auto entry = g["palette"][i];
    const std::string ep = "graph.palette[" + std::to_string(i) + "]";
    RejectUnknown(entry, ep, {"edges", "laplacian"});
    try {
      if (entry["edges"] && !entry["laplacian"]) {
        std::vector<std::tuple<int, int, double>> edges;
        const auto list = entry["edges"];
        if (!list.IsSequence()) Fail(ep + ".edges", "expected a list of [i, j, w]");
        for (std::size_t e = 0; e < list.size(); ++e) {
          const std::string xp = ep + ".edges[" + std::to_string(e) + "]";
          if (!list[e].IsSequence() || (list[e].size() != 2 && list[e].size() != 3)) {
            Fail(xp, "expected [i, j] or [i, j, weight]");
          }
          const double w = list[e].size() == 3 ? Scalar<double>(list[e][2], xp) : 1.0;
          edges.emplace_back(Scalar<int>(list[e][0], xp), Scalar<int>(list[e][1], xp), w);
        }
        c->palette.push_back(Laplacian::FromUndirectedEdges(c->agents, edges));
      } else if (entry["laplacian"] && !entry["edges"]) {
        const MatrixXd l = Matrix(entry["laplacian"], ep + ".laplacian");
        if (l.rows() != c->agents) Fail(ep + ".laplacian", "must be agents×agents");
        c->palette.emplace_back(l);
      } else {
        Fail(ep, "give exactly one of edges or laplacian");
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kConfig) throw;
      Fail(ep, e.what());
    }
  }
  if (!g["schedule"]) Fail("graph.schedule", "missing");
  const auto s = g["schedule"];
  const std::string sp = "graph.schedule";
  RejectUnknown(s, sp, {"kind", "dwell", "stride", "seed", "table"});
  const auto kind = OneOf(s, "kind", sp, {"constant", "periodic", "dwell", "random", "sparse", "custom"});
  if (!kind) Fail("graph.schedule.kind", "missing");
  c->schedule.kind = KindFromString(*kind);
  Optional(s, "dwell", sp, &c->schedule.dwell);
  Optional(s, "stride", sp, &c->schedule.stride);
  Optional(s, "seed", sp, &c->schedule.seed);
  if (s["table"]) c->schedule.table = List<int>(s["table"], "graph.schedule.table");
  if (c->schedule.kind == ScheduleKind::kCustom && c->schedule.table.empty()) {
    Fail("graph.schedule.table", "custom schedules need a table");
  }
  if (g["basis"]) {
    if (g["basis"].IsScalar()) {
      if (g["basis"].Scalar() != "householder") {
        Fail("graph.basis", "expected 'householder' or an N×(N-1) matrix");
      }
    } else {
      c->basis = Matrix(g["basis"], "graph.basis");
    }
  }
}

void ParseAnalysis(const YAML::Node& a, AnalysisSpec* s) {
  const std::string p = "analysis";
  RejectUnknown(a, p, {"connectivity_window", "observability_window", "epsilon_window",
                       "observability", "k0_scan", "horizon", "tol_pd", "tol_conn", "tol_psd"});
  Optional(a, "connectivity_window", p, &s->connectivity_window);
  Optional(a, "observability_window", p, &s->observability_window);
  Optional(a, "epsilon_window", p, &s->epsilon_window);
  if (auto m = OneOf(a, "observability", p, {"weak", "strong"})) {
    s->mode = *m == "weak" ? ObservabilityMode::kWeak : ObservabilityMode::kStrong;
  }
  Optional(a, "k0_scan", p, &s->k0_scan);
  Optional(a, "horizon", p, &s->horizon);
  Optional(a, "tol_pd", p, &s->tol_pd);
  Optional(a, "tol_conn", p, &s->tol_conn);
  Optional(a, "tol_psd", p, &s->tol_psd);
}

void ParseSimulation(const YAML::Node& n, SimulationSpec* s) {
  const std::string p = "simulation";
  RejectUnknown(n, p, {"horizon", "seeds", "x0", "tol_err", "window", "cap", "log_states"});
  Optional(n, "horizon", p, &s->horizon);
  if (n["seeds"]) s->seeds = List<std::uint64_t>(n["seeds"], "simulation.seeds");
  if (n["x0"]) s->x0 = Matrix(n["x0"], "simulation.x0");
  Optional(n, "tol_err", p, &s->tol_err);
  Optional(n, "window", p, &s->window);
  Optional(n, "cap", p, &s->cap);
  Optional(n, "log_states", p, &s->log_states);
  if (s->seeds.empty() && !s->x0) Fail("simulation.seeds", "need at least one seed");
}

void ParseExpect(const YAML::Node& e, Expectations* x) {
  const std::string p = "expect";
  RejectUnknown(e, p, {"F", "F_tol", "X", "X_tol", "gramian", "hinf", "hinf_tol", "hinf_below",
                       "gain_bound", "schur", "theorem1", "theorem2",
                       "direct_product_at_least", "simulation", "slower_than"});
  if (e["F"]) x->F = Matrix(e["F"], "expect.F");
  if (e["X"]) x->X = Matrix(e["X"], "expect.X");
  Optional(e, "F_tol", p, &x->F_tol);
  Optional(e, "X_tol", p, &x->X_tol);
  if (e["gramian"]) {
    const auto g = e["gramian"];
    const std::string gp = "expect.gramian";
    RejectUnknown(g, gp, {"k0", "window", "coupling", "matrix", "tol", "rank"});
    GramianExpectation ge;
    Optional(g, "k0", gp, &ge.k0);
    Optional(g, "window", gp, &ge.window);
    Optional(g, "coupling", gp, &ge.coupling);
    if (g["matrix"]) ge.matrix = Matrix(g["matrix"], gp + ".matrix");
    Optional(g, "tol", gp, &ge.tol);
    if (g["rank"]) ge.rank = Scalar<int>(g["rank"], gp + ".rank");
    x->gramian = ge;
  }
  if (e["hinf"]) x->hinf = Scalar<double>(e["hinf"], "expect.hinf");
  Optional(e, "hinf_tol", p, &x->hinf_tol);
  if (e["hinf_below"]) x->hinf_below = Scalar<double>(e["hinf_below"], "expect.hinf_below");
  if (e["gain_bound"]) x->gain_bound = Scalar<bool>(e["gain_bound"], "expect.gain_bound");
  if (e["schur"]) x->schur = Scalar<bool>(e["schur"], "expect.schur");
  x->theorem1 = OneOf(e, "theorem1", p, {"yes", "no"});
  x->theorem2 = OneOf(e, "theorem2", p, {"yes", "no", "conservative-pass"});
  if (e["direct_product_at_least"]) {
    x->direct_product_at_least =
        Scalar<double>(e["direct_product_at_least"], "expect.direct_product_at_least");
  }
  x->simulation = OneOf(e, "simulation", p, {"converged", "diverged", "not-converged"});
  if (e["slower_than"]) x->slower_than = Scalar<std::string>(e["slower_than"], "expect.slower_than");
}

}  // namespace

ExperimentConfig ParseConfig(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::kConfig, origin + ": " + e.what());
  }
  try {
    RejectUnknown(root, "", {"name", "description", "dynamics", "gain", "mu", "graph",
                             "analysis", "simulation", "expect", "output"});
    ExperimentConfig c;
    Optional(root, "name", "", &c.name);
    if (c.name.empty()) Fail("name", "missing");
    Optional(root, "description", "", &c.description);

    if (!root["dynamics"]) Fail("dynamics", "missing");
    const auto d = root["dynamics"];
    RejectUnknown(d, "dynamics", {"A", "B", "tol_spec"});
    if (!d["A"] || !d["B"]) Fail("dynamics", "needs A and B");
    c.A = Matrix(d["A"], "dynamics.A");
    c.B = Matrix(d["B"], "dynamics.B");
    if (c.A.rows() != c.A.cols()) Fail("dynamics.A", "must be square");
    if (c.B.rows() != c.A.rows()) Fail("dynamics.B", "must have as many rows as A");
    Optional(d, "tol_spec", "dynamics", &c.tol_spec);

    if (!root["gain"]) Fail("gain", "missing");
    ParseGain(root["gain"], &c);
    if (c.mode == GainMode::kExplicit &&
        (c.F.rows() != c.B.cols() || c.F.cols() != c.A.rows())) {
      Fail("gain.F", "must be m×n");
    }

    if (!root["mu"]) Fail("mu", "missing");
    c.mu = Scalar<double>(root["mu"], "mu");
    if (!root["graph"]) Fail("graph", "missing");
    ParseGraph(root["graph"], &c);
    if (c.basis && (c.basis->rows() != c.agents || c.basis->cols() != c.agents - 1)) {
      Fail("graph.basis", "must be N×(N-1)");
    }
    if (root["analysis"]) ParseAnalysis(root["analysis"], &c.analysis);
    if (root["simulation"]) ParseSimulation(root["simulation"], &c.simulation);
    if (c.simulation.x0 &&
        (c.simulation.x0->rows() != c.A.rows() || c.simulation.x0->cols() != c.agents)) {
      Fail("simulation.x0", "must be n×N (column i is agent i)");
    }
    if (root["expect"]) ParseExpect(root["expect"], &c.expect);
    if (root["output"]) {
      RejectUnknown(root["output"], "output", {"dir"});
      Optional(root["output"], "dir", "output", &c.out_dir);
    }
    return c;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kConfig) {
      const std::string what = e.what();
      throw Error(ErrorKind::kConfig,
                  origin + ": " + what.substr(ToString(ErrorKind::kConfig).size() + 2));
    }
    throw;
  }
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, path + ": cannot open");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str(), path);
}

AgentDynamics MakeDynamics(const ExperimentConfig& config) {
  return {config.A, config.B};
}

LaplacianSchedule MakeSchedule(const ExperimentConfig& c) {
  switch (c.schedule.kind) {
    case ScheduleKind::kConstant: return LaplacianSchedule::Constant(c.palette.front());
    case ScheduleKind::kPeriodic: return LaplacianSchedule::Periodic(c.palette);
    case ScheduleKind::kDwellSwitched:
      return LaplacianSchedule::DwellSwitched(c.palette, c.schedule.dwell);
    case ScheduleKind::kRandomUniform:
      return LaplacianSchedule::RandomUniform(c.palette, c.schedule.seed);
    case ScheduleKind::kSparse: return LaplacianSchedule::Sparse(c.palette, c.schedule.stride);
    case ScheduleKind::kCustom: return LaplacianSchedule::Custom(c.palette, c.schedule.table);
  }
  throw Error(ErrorKind::kConfig, "unknown schedule kind");
}

ReductionBasis MakeBasis(const ExperimentConfig& c) {
  return c.basis ? ReductionBasis::FromColumns(*c.basis) : ReductionBasis::Householder(c.agents);
}

}  // namespace tvcons::cli
