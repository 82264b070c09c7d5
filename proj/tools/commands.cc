#include "commands.h"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "tvcons/analysis.h"
#include "tvcons/errors.h"
#include "tvcons/linalg.h"
#include "tvcons/report.h"
#include "tvcons/sim.h"

namespace tvcons::cli {

namespace {

using Clock = std::chrono::steady_clock;

class Timer {
 public:
  Timer(Report* report, std::string key, bool enabled)
      : report_(report), key_(std::move(key)), enabled_(enabled), start_(Clock::now()) {}
  ~Timer() {
    if (!enabled_) return;
    const std::chrono::duration<double, std::milli> ms = Clock::now() - start_;
    report_->Add("timing." + key_ + "_ms", ms.count());
  }

 private:
  Report* report_;
  std::string key_;
  bool enabled_;
  Clock::time_point start_;
};

std::string_view ModeName(ObservabilityMode m) {
  return m == ObservabilityMode::kWeak ? "weak" : "strong";
}

void EchoSettings(const ExperimentConfig& c, Report* r) {
  r->Add("config.name", c.name);
  r->Add("dynamics.A", c.A);
  r->Add("dynamics.B", c.B);
  r->Add("dynamics.tol_spec", c.tol_spec);
  r->Add("gain.mode", ToString(c.mode));
  if (c.mode == GainMode::kUnstable) {
    r->Add("gain.gamma", c.gamma);
    r->Add("gain.eps_gamma", c.eps_gamma);
    r->Add("gain.enforce_bounds", c.enforce_bounds);
    r->Add("gain.tol_are", c.tol_are);
  }
  if (c.mode == GainMode::kExplicit) r->Add("gain.F", c.F);
  r->Add("mu", c.mu);
  r->Add("graph.agents", c.agents);
  for (std::size_t i = 0; i < c.palette.size(); ++i) {
    r->Add("graph.palette." + std::to_string(i), c.palette[i].matrix());
  }
  r->Add("graph.schedule.kind", ToString(c.schedule.kind));
  switch (c.schedule.kind) {
    case ScheduleKind::kDwellSwitched: r->Add("graph.schedule.dwell", c.schedule.dwell); break;
    case ScheduleKind::kSparse: r->Add("graph.schedule.stride", c.schedule.stride); break;
    case ScheduleKind::kRandomUniform:
      r->Add("graph.schedule.seed", static_cast<long>(c.schedule.seed));
      break;
    case ScheduleKind::kCustom: {
      std::string t;
      for (int v : c.schedule.table) t += (t.empty() ? "" : ",") + std::to_string(v);
      r->Add("graph.schedule.table", t);
      break;
    }
    default: break;
  }
  if (c.basis) {
    r->Add("graph.basis", *c.basis);
  } else {
    r->Add("graph.basis", "householder");
  }
  const auto& a = c.analysis;
  r->Add("analysis.connectivity_window", a.connectivity_window);
  r->Add("analysis.observability_window", a.observability_window);
  r->Add("analysis.epsilon_window", a.epsilon_window);
  r->Add("analysis.observability", ModeName(a.mode));
  r->Add("analysis.k0_scan", a.k0_scan);
  r->Add("analysis.horizon", a.horizon);
  r->Add("analysis.tol_pd", a.tol_pd);
  r->Add("analysis.tol_conn", a.tol_conn);
  r->Add("analysis.tol_psd", a.tol_psd);
  const auto& s = c.simulation;
  r->Add("simulation.horizon", s.horizon);
  if (s.x0) {
    r->Add("simulation.x0", *s.x0);
  } else {
    std::string seeds;
    for (auto v : s.seeds) seeds += (seeds.empty() ? "" : ",") + std::to_string(v);
    r->Add("simulation.seeds", seeds);
  }
  r->Add("simulation.tol_err", s.tol_err);
  r->Add("simulation.window", s.window);
  r->Add("simulation.cap", s.cap);
  r->Add("simulation.log_states", s.log_states);
}

GainDesign Design(const ExperimentConfig& c, const AgentDynamics& dyn, Report* r) {
  GainDesign d;
  switch (c.mode) {
    case GainMode::kStable: {
      StableDesignOptions opts;
      opts.spectral.spec = c.tol_spec;
      d = FromStable(DesignStableGain(dyn, opts));
      const auto& s = *d.stable;
      r->Add("design.X", s.X);
      r->Add("design.rho", s.rho);
      r->Add("design.Sa", s.Sa);
      r->Add("design.slack", s.slack);
      r->Add("design.lyapunov_residual", s.lyapunov_residual);
      r->Add("design.schur_radius", s.schur_radius);
      break;
    }
    case GainMode::kUnstable: {
      UnstableDesignOptions opts;
      opts.tol_are = c.tol_are;
      opts.enforce_bounds = c.enforce_bounds;
      d = FromUnstable(DesignUnstableGain(dyn, c.gamma, c.eps_gamma, opts));
      const auto& u = *d.unstable;
      r->Add("design.X", u.X);
      r->Add("design.are_residual", u.are_residual);
      r->Add("design.iterations", u.iterations);
      r->Add("design.monotone", u.monotone);
      r->Add("design.gain_margin", u.gain_margin);
      r->Add("design.gain_bound_ok", u.gain_bound_ok());
      r->Add("design.hinf_bound_ok", u.hinf_bound_ok());
      r->Add("design.schur_radius", u.schur_radius);
      r->Add("design.stabilizing", u.stabilizing());
      break;
    }
    case GainMode::kExplicit:
      d = FromExplicit(dyn, c.F);
      break;
  }
  r->Add("design.F", d.F);
  r->Add("design.hinf_TF", d.hinf_TF);
  r->Add("design.mahler_measure", MahlerMeasure(dyn.A()));
  return d;
}

struct CheckResult {
  bool assumption_a = false;
  std::optional<Theorem1Verdict> theorem1;
  std::optional<SmallGainAnalysis> theorem2;

  std::string T1() const {
    return theorem1 ? (theorem1->consensus ? "yes" : "no") : "n/a";
  }
  std::string T2() const {
    return theorem2 ? std::string(ToString(theorem2->verdict.outcome)) : "n/a";
  }
  bool negative() const { return T1() == "no" || T2() == "no"; }
};

CheckResult Check(const ExperimentConfig& c, const AgentDynamics& dyn, const GainDesign& design,
                  bool timings, Report* r) {
  CheckResult out;
  const auto schedule = MakeSchedule(c);
  const auto basis = MakeBasis(c);
  const auto& a = c.analysis;

  {
    Timer t(r, "assumption_a", timings);
    SpectralTolerances tol;
    tol.spec = c.tol_spec;
    try {
      const auto cls = ValidateAssumptionA(dyn, tol);
      out.assumption_a = true;
      r->Add("assumption_a.controllability_index", cls.controllability_index);
      r->Add("assumption_a.semi_simple", cls.semi_simple);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNotUnitCircle && e.kind() != ErrorKind::kNotReachable) throw;
      r->Add("assumption_a.error", e.what());
    }
    r->Add("assumption_a.holds", out.assumption_a);
  }

  {
    Timer t(r, "connectivity", timings);
    const auto conn = CheckUniformConnectivity(schedule, a.connectivity_window, a.horizon,
                                               {a.tol_conn});
    r->Add("connectivity.window", conn.window);
    r->Add("connectivity.min_lambda2", conn.min_lambda2);
    r->Add("connectivity.argmin_k", conn.argmin_k);
    r->Add("connectivity.scanned_starts", conn.scanned_starts);
    r->Add("connectivity.periodic_shortcut", conn.periodic_shortcut);
    r->Add("connectivity.uniformly_connected", conn.uniformly_connected);
  }

  AssumptionLReport al;
  al.mu = c.mu;
  {
    Timer t(r, "assumption_l", timings);
    try {
      al = CheckAssumptionL(schedule, a.horizon, c.mu, {a.tol_psd});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kAssumptionLViolated) throw;
      r->Add("assumption_l.error", e.what());
      al.holds = false;
    }
    r->Add("assumption_l.mu", al.mu);
    r->Add("assumption_l.mu_bar", al.mu_bar);
    r->Add("assumption_l.unconstrained", al.unconstrained);
    r->Add("assumption_l.argmin_k", al.argmin_k);
    r->Add("assumption_l.tested_steps", al.tested_steps);
    r->Add("assumption_l.exhaustive", al.exhaustive);
    r->Add("assumption_l.holds", al.holds);
  }

  ObservabilityReport obs;
  {
    Timer t(r, "observability", timings);
    ObservabilityOptions opts;
    opts.tol_pd = a.tol_pd;
    opts.k0_scan = a.k0_scan;
    obs = CheckObservability(dyn, design.F, schedule, basis, a.observability_window, a.mode,
                             opts);
    r->Add("observability.mode", ModeName(obs.mode));
    r->Add("observability.window", obs.window);
    r->Add("observability.samples", static_cast<long>(obs.samples.size()));
    r->Add("observability.exhaustive", obs.exhaustive);
    r->Add("observability.max_rank", obs.max_rank());
    r->Add("observability.eps_o", obs.eps_o);
    r->Add("observability.weak_verdict", obs.weak_verdict);
    r->Add("observability.strong_verdict", obs.strong_verdict);
    r->Add("observability.verdict", obs.verdict());
  }

  if (design.mode == GainMode::kStable) {
    out.theorem1 = EvaluateTheorem1(design, out.assumption_a, al, obs);
    r->Add("theorem1.assumption_a", out.theorem1->assumption_a);
    r->Add("theorem1.assumption_l", out.theorem1->assumption_l);
    r->Add("theorem1.weakly_observable", out.theorem1->weakly_observable);
    r->Add("theorem1.consensus", out.theorem1->consensus);
  } else if (design.mode == GainMode::kUnstable) {
    Timer t(r, "small_gain", timings);
    EpsilonOptions opts;
    opts.k0_scan = a.k0_scan;
    out.theorem2 = AnalyzeSmallGain(dyn, design, schedule, basis, c.mu, a.epsilon_window,
                                    out.assumption_a, al, opts);
    const auto& sg = *out.theorem2;
    r->Add("theorem2.epsilon_window", sg.epsilon.window);
    r->Add("theorem2.epsilon_trajectories", EpsilonEstimate::kTrajectoryClass);
    r->Add("theorem2.epsilon", sg.epsilon.epsilon);
    r->Add("theorem2.epsilon_argmin_k0", sg.epsilon.argmin_k0);
    r->Add("theorem2.epsilon_exhaustive", sg.epsilon.exhaustive);
    r->Add("theorem2.delta_analytic", sg.delta.analytic);
    r->Add("theorem2.delta_pointwise", sg.delta.pointwise);
    if (sg.delta.windowed) r->Add("theorem2.delta_windowed", *sg.delta.windowed);
    const auto& v = sg.verdict;
    r->Add("theorem2.gamma", v.gamma);
    r->Add("theorem2.gamma_delta", v.gamma_delta);
    r->Add("theorem2.hinf_TF", v.hinf_TF);
    r->Add("theorem2.hinf_below_gamma", v.hinf_below_gamma);
    r->Add("theorem2.direct_delta", v.direct_delta);
    r->Add("theorem2.direct_product", v.direct_product);
    r->Add("theorem2.outcome", ToString(v.outcome));
  }
  return out;
}

struct SeedResult {
  std::uint64_t seed = 0;
  SimulationTrace trace;
};

std::vector<SeedResult> Simulate(const ExperimentConfig& c, const AgentDynamics& dyn,
                                 const GainDesign& design, Report* r) {
  const auto& s = c.simulation;
  std::vector<SeedResult> out;
  const std::vector<std::uint64_t> seeds =
      s.x0 ? std::vector<std::uint64_t>{0} : s.seeds;
  for (const auto seed : seeds) {
    SimulationConfig sc(dyn, design.F, c.mu, MakeSchedule(c));
    sc.horizon = s.horizon;
    sc.x0 = s.x0;
    sc.seed = seed;
    sc.tol_err = s.tol_err;
    sc.window = s.window;
    sc.cap = s.cap;
    sc.log_states = s.log_states;
    SeedResult res{seed, Run(sc)};
    const std::string key = s.x0 ? "simulation.x0" : "simulation.seed" + std::to_string(seed);
    r->Add(key + ".verdict", ToString(res.trace.verdict));
    r->Add(key + ".steps", static_cast<long>(res.trace.error.size()) - 1);
    r->Add(key + ".final_error", res.trace.error.empty() ? 0.0 : res.trace.error.back());
    if (res.trace.first_passage) {
      r->Add(key + ".first_passage", *res.trace.first_passage);
    } else {
      r->Add(key + ".first_passage", "none");
    }
    r->Add(key + ".overflow", res.trace.overflow);
    out.push_back(std::move(res));
  }
  return out;
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::kConfig, "cannot write " + path.string());
  f << text;
}

std::filesystem::path OutDir(const ExperimentConfig& c) {
  std::filesystem::path dir(c.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kConfig, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void Emit(const ExperimentConfig& c, std::string_view command, const Report& r,
          const std::string& trailer, std::ostream& out) {
  const std::string text = r.str() + trailer;
  out << text;
  if (!c.out_dir.empty()) {
    WriteFile(OutDir(c) / (c.name + "." + std::string(command) + ".txt"), text);
  }
}

}  // namespace

void ApplyOverrides(const Overrides& o, ExperimentConfig* c) {
  if (o.out) c->out_dir = *o.out;
  if (o.seed) {
    c->simulation.seeds = {*o.seed};
    c->simulation.x0.reset();
  }
  if (o.tol_pd) c->analysis.tol_pd = *o.tol_pd;
  if (o.tol_err) c->simulation.tol_err = *o.tol_err;
  if (o.tol_are) c->tol_are = *o.tol_are;
  if (o.tol_conn) c->analysis.tol_conn = *o.tol_conn;
  if (o.tol_psd) c->analysis.tol_psd = *o.tol_psd;
  if (o.tol_spec) c->tol_spec = *o.tol_spec;
  if (o.scan_k0) c->analysis.k0_scan = *o.scan_k0;
}

int ExitCodeFor(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->kind()) {
      case ErrorKind::kConfig:
      case ErrorKind::kInvalidArgument:
      case ErrorKind::kDimensionMismatch:
        return kExitConfig;
      default:
        return kExitNumerical;
    }
  }
  return kExitNumerical;
}

ExperimentConfig LoadExperiment(const std::string& path) {
  constexpr std::string_view kPrefix = "builtin:";
  if (path.rfind(kPrefix, 0) == 0) {
    const std::string name = path.substr(kPrefix.size());
    for (const auto& s : BuiltinScenarios()) {
      if (s.name == name) return ParseConfig(std::string(s.yaml), path);
    }
    throw Error(ErrorKind::kConfig, "no built-in scenario named '" + name + "'");
  }
  return LoadConfig(path);
}

int CmdDesign(const ExperimentConfig& c, bool timings, std::ostream& out) {
  Report r;
  EchoSettings(c, &r);
  const auto dyn = MakeDynamics(c);
  GainDesign d;
  {
    Timer t(&r, "design", timings);
    d = Design(c, dyn, &r);
  }
  const bool ok = !d.unstable || d.unstable->ok();
  r.Add("design.certificate_ok", ok);
  Emit(c, "design", r, "", out);
  return ok ? kExitOk : kExitNumerical;
}

int CmdCheck(const ExperimentConfig& c, bool timings, std::ostream& out) {
  Report r;
  EchoSettings(c, &r);
  const auto dyn = MakeDynamics(c);
  GainDesign d;
  {
    Timer t(&r, "design", timings);
    d = Design(c, dyn, &r);
  }
  const auto result = Check(c, dyn, d, timings, &r);
  Emit(c, "check", r, "VERDICT theorem1=" + result.T1() + " theorem2=" + result.T2() + "\n",
       out);
  return result.negative() ? kExitNegative : kExitOk;
}

int CmdSimulate(const ExperimentConfig& c, bool timings, std::ostream& out) {
  Report r;
  EchoSettings(c, &r);
  const auto dyn = MakeDynamics(c);
  GainDesign d;
  {
    Timer t(&r, "design", timings);
    d = Design(c, dyn, &r);
  }
  std::vector<SeedResult> runs;
  {
    Timer t(&r, "simulation", timings);
    runs = Simulate(c, dyn, d, &r);
  }
  bool all = true;
  for (const auto& run : runs) {
    all = all && run.trace.verdict == SimVerdict::kConverged;
    if (!c.out_dir.empty()) {
      std::ostringstream csv;
      WriteTraceCsv(csv, run.trace, dyn.n());
      const std::string stem =
          c.simulation.x0 ? c.name + "_x0" : c.name + "_seed" + std::to_string(run.seed);
      WriteFile(OutDir(c) / (stem + ".csv"), csv.str());
    }
  }
  r.Add("simulation.all_converged", all);
  Emit(c, "simulate", r, "", out);
  return all ? kExitOk : kExitNegative;
}

// ---------------------------------------------------------------------------
// Reproduction suite.

namespace {

struct Row {
  std::string scenario;
  std::string check;
  std::string expected;
  std::string observed;
  bool pass = false;
};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void CompareMatrix(std::vector<Row>* rows, const std::string& scenario, const std::string& what,
                   const MatrixXd& got, const MatrixXd& want, double tol) {
  Row row{scenario, what, "within " + Num(tol), "", false};
  if (got.rows() != want.rows() || got.cols() != want.cols()) {
    row.observed = "shape " + std::to_string(got.rows()) + "x" + std::to_string(got.cols());
  } else {
    const double dev = linalg::MaxAbs(got - want);
    row.observed = "max dev " + Num(dev);
    row.pass = dev <= tol;
  }
  rows->push_back(row);
}

// First passage per seed, keyed by scenario name, for slower_than.
using PassageMap = std::map<std::string, std::map<std::uint64_t, std::optional<long>>>;

void EvaluateScenario(const ExperimentConfig& c, PassageMap* passages, std::vector<Row>* rows) {
  const auto& x = c.expect;
  const std::string& name = c.name;
  Report r;
  const auto dyn = MakeDynamics(c);
  const auto d = Design(c, dyn, &r);

  if (x.F) CompareMatrix(rows, name, "gain F", d.F, *x.F, x.F_tol);
  if (x.X) {
    const MatrixXd got = d.stable ? d.stable->X : d.unstable ? d.unstable->X : MatrixXd();
    CompareMatrix(rows, name, "Lyapunov/Riccati X", got, *x.X, x.X_tol);
  }
  if (x.gain_bound) {
    const bool ok = d.unstable && d.unstable->gain_bound_ok();
    rows->push_back({name, "B'XB < gamma^2", *x.gain_bound ? "true" : "false",
                     d.unstable ? Num(d.unstable->gain_margin) + " margin" : "n/a",
                     ok == *x.gain_bound});
  }
  if (x.schur) {
    const double rho = d.stable ? d.stable->schur_radius
                                : d.unstable ? d.unstable->schur_radius : -1.0;
    rows->push_back({name, "A-BF Schur", *x.schur ? "true" : "false", "radius " + Num(rho),
                     (rho >= 0.0 && rho < 1.0) == *x.schur});
  }
  if (x.hinf) {
    rows->push_back({name, "hinf(T_F)", Num(*x.hinf) + " +- " + Num(x.hinf_tol),
                     Num(d.hinf_TF), std::abs(d.hinf_TF - *x.hinf) <= x.hinf_tol});
  }
  if (x.hinf_below) {
    rows->push_back({name, "hinf(T_F)", "< " + Num(*x.hinf_below), Num(d.hinf_TF),
                     d.hinf_TF < *x.hinf_below});
  }
  if (x.gramian) {
    const auto& g = *x.gramian;
    const MatrixXd o = ObservabilityGramian(dyn, d.F, MakeSchedule(c), MakeBasis(c), g.k0,
                                            g.window, g.coupling);
    const std::string label =
        "gramian O(" + std::to_string(g.k0) + "," + std::to_string(g.window) + ")";
    if (g.matrix) CompareMatrix(rows, name, label + " entries", o, *g.matrix, g.tol);
    if (g.rank) {
      const int rank = linalg::NumericalRank(o, c.analysis.tol_pd);
      rows->push_back({name, label + " rank", std::to_string(*g.rank), std::to_string(rank),
                       rank == *g.rank});
    }
  }
  if (x.theorem1 || x.theorem2 || x.direct_product_at_least) {
    const auto res = Check(c, dyn, d, false, &r);
    if (x.theorem1) {
      rows->push_back({name, "theorem1", *x.theorem1, res.T1(), res.T1() == *x.theorem1});
    }
    if (x.theorem2) {
      rows->push_back({name, "theorem2", *x.theorem2, res.T2(), res.T2() == *x.theorem2});
    }
    if (x.direct_product_at_least) {
      const double p = res.theorem2 ? res.theorem2->verdict.direct_product : 0.0;
      rows->push_back({name, "small-gain product", ">= " + Num(*x.direct_product_at_least),
                       Num(p), res.theorem2 && p >= *x.direct_product_at_least});
    }
  }
  if (x.simulation || x.slower_than) {
    const auto runs = Simulate(c, dyn, d, &r);
    int converged = 0, diverged = 0;
    auto& mine = (*passages)[name];
    for (const auto& run : runs) {
      converged += run.trace.verdict == SimVerdict::kConverged;
      diverged += run.trace.verdict == SimVerdict::kDiverged;
      mine[run.seed] = run.trace.first_passage;
    }
    const int total = static_cast<int>(runs.size());
    if (x.simulation) {
      bool pass = false;
      if (*x.simulation == "converged") pass = converged == total;
      if (*x.simulation == "diverged") pass = diverged == total;
      if (*x.simulation == "not-converged") pass = converged == 0;
      rows->push_back({name, "simulation (" + std::to_string(total) + " runs)", *x.simulation,
                       std::to_string(converged) + " converged, " + std::to_string(diverged) +
                           " diverged",
                       pass});
    }
    if (x.slower_than) {
      Row row{name, "first passage", "later than " + *x.slower_than, "", false};
      const auto ref = passages->find(*x.slower_than);
      if (ref == passages->end()) {
        row.observed = "reference not run";
      } else {
        int later = 0, compared = 0;
        for (const auto& [seed, fp] : mine) {
          const auto other = ref->second.find(seed);
          if (other == ref->second.end()) continue;
          ++compared;
          if (fp && other->second && *fp > *other->second) ++later;
        }
        row.observed = std::to_string(later) + "/" + std::to_string(compared) + " seeds later";
        row.pass = compared > 0 && later == compared;
      }
      rows->push_back(row);
    }
  }
}

std::string Pad(const std::string& s, std::size_t w) {
  // Width counts bytes; the table only uses ASCII.
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

}  // namespace

int CmdPaper(std::string_view suite, const Overrides& overrides, std::ostream& out) {
  if (suite != "example1" && suite != "example2" && suite != "all") {
    throw Error(ErrorKind::kConfig, "suite must be example1, example2 or all");
  }
  std::vector<Row> rows;
  PassageMap passages;
  for (const auto& s : BuiltinScenarios()) {
    if (suite != "all" && s.name.rfind(suite, 0) != 0) continue;
    const auto start = Clock::now();
    ExperimentConfig c = ParseConfig(std::string(s.yaml), "builtin:" + std::string(s.name));
    ApplyOverrides(overrides, &c);
    try {
      EvaluateScenario(c, &passages, &rows);
    } catch (const std::exception& e) {
      rows.push_back({c.name, "run", "completes", e.what(), false});
    }
    if (overrides.timings) {
      const std::chrono::duration<double> sec = Clock::now() - start;
      rows.push_back({c.name, "wall time", "-", Num(sec.count()) + " s", true});
    }
  }

  std::size_t w[4] = {8, 5, 8, 8};
  for (const auto& r : rows) {
    w[0] = std::max(w[0], r.scenario.size());
    w[1] = std::max(w[1], r.check.size());
    w[2] = std::max(w[2], r.expected.size());
    w[3] = std::max(w[3], r.observed.size());
  }
  out << Pad("scenario", w[0]) << "  " << Pad("check", w[1]) << "  " << Pad("expected", w[2])
      << "  " << Pad("observed", w[3]) << "  result\n";
  int passed = 0;
  for (const auto& r : rows) {
    out << Pad(r.scenario, w[0]) << "  " << Pad(r.check, w[1]) << "  " << Pad(r.expected, w[2])
        << "  " << Pad(r.observed, w[3]) << "  " << (r.pass ? "PASS" : "FAIL") << "\n";
    passed += r.pass;
  }
  out << passed << "/" << rows.size() << " checks passed\n";
  return passed == static_cast<int>(rows.size()) ? kExitOk : kExitNegative;
}

}  // namespace tvcons::cli
