// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: gasnet_acceptance [AC1 AC2 ...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include "brute_force.hpp"
#include "gasnet/oracles.hpp"
#include "gasnet/output.hpp"
#include "gasnet/scenario.hpp"
#include "gasnet/scheme.hpp"

using namespace gasnet;

namespace {

// Tolerances.
constexpr double kMassTol = 1e-12;           // relative, every step
constexpr double kLedgerTolConverged = 1e-8; // times E0, fixed point run to kResidualTol
constexpr double kLedgerTolTwoSweeps = 1e-3; // times E0
constexpr double kResidualTol = 1e-10;
constexpr double kEnergyRatio = 0.983;
constexpr double kEnergyRatioTol = 0.005;
constexpr double kShockTubeE0 = 25.0;
constexpr double kL1Factor = 1.5;
constexpr double kShockTolH = 3.0;           // in units of h
constexpr double kSteadyPipeTol = 1e-2;      // times mean density
constexpr double kSteadyStep = 1e-8;
constexpr double kJunctionRhoTol = 1e-3;
constexpr double kJunctionMTol = 1e-6;
constexpr double kJunctionRho = 3.0;
constexpr double kAssemblyTol = 1e-12;
constexpr double kAntisymTol = 1e-12;
// Window over which the converged-iteration ledger is checked on the two long presets.
constexpr double kConvergedWindow = 5.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct PresetRun {
  Scenario scenario;
  std::optional<Simulation> sim;
  Trajectory traj;
  double max_kirchhoff = 0.0;  // max |Kirchhoff sum| over all junctions and steps
  double seconds = 0.0;
};

PresetRun do_run(Scenario sc) {
  PresetRun r;
  r.scenario = sc;
  r.sim.emplace(make_simulation(sc));
  const NetworkGraph& g = r.sim->graph;
  const auto interior = classify_vertices(g).interior;
  RunConfig cfg = r.sim->config;
  cfg.on_step = [&](const State&, std::span<const double> nodal) {
    for (VertexId v : interior)
      r.max_kirchhoff = std::max(r.max_kirchhoff, std::abs(kirchhoff_residual(r.sim->dofs, nodal, v)));
  };
  const auto start = std::chrono::steady_clock::now();
  r.traj = run(r.sim->dofs, r.sim->law, r.sim->initial, cfg);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// Full preset runs with the preset settings (two sweeps), shared between criteria.
const PresetRun& preset_run(const std::string& name) {
  static std::map<std::string, PresetRun> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, do_run(preset(name))).first;
  return it->second;
}

double max_mass_drift(const Trajectory& t, double reference) {
  double d = 0.0;
  for (const auto& r : t.records) d = std::max(d, std::abs(r.mass - reference) / reference);
  return d;
}

// Largest cumulative budget over steps n >= 1 (the initial record is 0 by definition).
double max_budget(const Trajectory& t) {
  double b = t.records.size() > 1 ? -INFINITY : 0.0;
  for (std::size_t n = 1; n < t.records.size(); ++n) b = std::max(b, t.records[n].cumulative_budget);
  return b;
}

Outcome ac1() {
  Outcome o{true, ""};
  for (const char* name : {"shock_tube", "friction_pipe", "junction"}) {
    const PresetRun& r = preset_run(name);
    const double m0 = r.traj.records.front().mass;
    const double ref = std::string(name) == "friction_pipe" ? 110.0 : m0;
    const double drift = max_mass_drift(r.traj, ref);
    const bool ok = r.traj.completed() && drift <= kMassTol;
    o.pass = o.pass && ok;
    o.detail += fmt("%s: M0=%.15g max|dM|/M=%.2e over %zu steps; ", name, m0, drift,
                    r.traj.records.size() - 1);
  }
  return o;
}

Outcome ac2() {
  Outcome o{true, ""};
  for (const char* name : {"shock_tube", "friction_pipe", "junction"}) {
    const PresetRun& two = preset_run(name);
    const double e0 = two.traj.records.front().energy;
    const double b2 = max_budget(two.traj);

    Scenario sc = preset(name);
    sc.fixpoint_tol = kResidualTol;
    if (sc.t_end > kConvergedWindow) {
      sc.t_end = kConvergedWindow;
      sc.steady_tol.reset();
      sc.snapshots.clear();
    }
    const PresetRun conv = do_run(sc);
    const double bc = max_budget(conv.traj);
    double worst_res = 0.0;
    for (const auto& r : conv.traj.records) worst_res = std::max(worst_res, r.nonlinear_residual);

    const bool ok = two.traj.completed() && conv.traj.completed() && b2 <= kLedgerTolTwoSweeps * e0 &&
                    bc <= kLedgerTolConverged * e0;
    o.pass = o.pass && ok;
    o.detail += fmt("%s: E0=%.6g two-sweep max budget/E0=%.3e (T=%g); converged (res<=%.1e, max res %.1e, "
                    "T=%g) max budget/E0=%.3e; ",
                    name, e0, b2 / e0, two.traj.records.back().t, kResidualTol, worst_res, sc.t_end, bc / e0);
  }
  return o;
}

Outcome ac3() {
  const PresetRun& r = preset_run("shock_tube");
  const double e0 = r.traj.records.front().energy;
  const auto& last = r.traj.records.back();
  const double ratio = last.energy / e0;
  const bool ok = r.traj.completed() && std::abs(last.t - 2.0) < 1e-12 &&
                  std::abs(e0 - kShockTubeE0) <= 1e-12 * kShockTubeE0 &&
                  std::abs(ratio - kEnergyRatio) <= kEnergyRatioTol;
  return {ok, fmt("E0=%.15g E(%.3g)=%.10g E/E0=%.6f (target %.3f +- %.3f)", e0, last.t, last.energy,
                  ratio, kEnergyRatio, kEnergyRatioTol)};
}

Outcome ac4() {
  Outcome o{true, ""};
  std::vector<double> l1;
  for (double h : {0.01, 0.005, 0.0025}) {
    Scenario sc = preset("shock_tube");
    sc.mesh_h = h;
    sc.tau = h / 2;
    sc.snapshots = {2.0};
    const PresetRun r = do_run(sc);
    if (!r.traj.completed()) return {false, fmt("run failed at h=%g", h)};
    const auto cmp = compare_dam_break(r.sim->dofs, r.traj.final_state, 3.0, 1.0, 0.0);
    l1.push_back(cmp.l1_error);
    const double shock_err = std::abs(cmp.shock_numeric - cmp.shock_exact);
    o.pass = o.pass && shock_err <= kShockTolH * h;
    o.detail += fmt("h=%g: L1=%.5f shock %.4f vs exact %.4f (|d|=%.1fh); ", h, cmp.l1_error,
                    cmp.shock_numeric, cmp.shock_exact, shock_err / h);
  }
  for (std::size_t k = 0; k + 1 < l1.size(); ++k) {
    const double factor = l1[k] / l1[k + 1];
    o.pass = o.pass && factor >= kL1Factor;
    o.detail += fmt("factor %.3f; ", factor);
  }
  return o;
}

Outcome ac5() {
  const PresetRun& r = preset_run("friction_pipe");
  const auto& last = r.traj.records.back();
  const SteadyPipeParams params = steady_pipe_params(r.scenario, *r.sim);
  const SteadyProfile prof = steady_pipe_shooting(params);
  const double mean = prof.mass / (params.x_right - params.x_left);
  const double err = steady_pipe_error(r.sim->dofs, r.traj.final_state, prof);
  const bool ok = r.traj.completed() && r.traj.steady_reached && last.max_rho_change <= kSteadyStep &&
                  err <= kSteadyPipeTol * mean;
  return {ok, fmt("steady=%d at t=%g (last change %.2e); oracle rho(-5)=%.8f rho(5)=%.8f; "
                  "Linf=%.3e = %.2e x mean %.6g (%.0fs)",
                  r.traj.steady_reached, last.t, last.max_rho_change, prof.rho.front(), prof.rho.back(),
                  err, err / mean, mean, r.seconds)};
}

Outcome ac6() {
  const PresetRun& r = preset_run("junction");
  const State& s = r.traj.final_state;
  double drho = 0.0, dm = 0.0;
  for (double v : s.rho) drho = std::max(drho, std::abs(v - kJunctionRho));
  for (double v : flux_nodal(r.sim->dofs, s)) dm = std::max(dm, std::abs(v));
  const bool ok = r.traj.completed() && drho <= kJunctionRhoTol && dm <= kJunctionMTol &&
                  r.max_kirchhoff == 0.0;
  return {ok, fmt("t=%g steady=%d |rho-3|inf=%.2e |m|inf=%.2e max|Kirchhoff sum|=%g over %zu steps (%.0fs)",
                  s.t, r.traj.steady_reached, drho, dm, r.max_kirchhoff, r.traj.records.size() - 1,
                  r.seconds)};
}

// Small instances for the assembly comparisons: graph, element count per edge,
// boundary spec.
struct Instance {
  NetworkGraph graph;
  int elems;
  BoundarySpec boundary;
};

Instance make_instance(int which, std::mt19937& rng) {
  std::uniform_real_distribution<double> a(0.0, 0.5), b(0.0, 50.0), c(0.3, 2.0), len(0.5, 2.0);
  auto edge = [&](int id, int from, int to) { return Edge{id, from, to, len(rng), a(rng), b(rng), c(rng), 0.0}; };
  switch (which % 4) {
    case 0:
      return {NetworkGraph(2, {edge(0, 0, 1)}), 10,
              {{0, BoundaryCondition::constant(0.7)}, {1, BoundaryCondition::table({{0.0, 0.0}, {1.0, 2.0}})}}};
    case 1:
      return {NetworkGraph(4, {edge(0, 0, 1), edge(1, 1, 2), edge(2, 1, 3)}), 3, {}};
    case 2:
      return {NetworkGraph(4, {edge(0, 0, 1), edge(1, 1, 2), edge(2, 3, 1)}), 4,
              {{0, BoundaryCondition::constant(-0.4)}, {2, BoundaryCondition::constant(0.9)}}};
    default:
      return {NetworkGraph(4, {edge(0, 0, 1), edge(1, 1, 2), edge(2, 2, 0), edge(3, 3, 2)}), 2,
              {{3, BoundaryCondition::constant(0.3)}}};
  }
}

struct RandomSweep {
  DofMap dofs;
  GasLaw law;
  State prev;
  Linearization tilde;
  double tau;
  double floor;
};

RandomSweep random_sweep(int which, std::mt19937& rng) {
  Instance inst = make_instance(which, rng);
  std::uniform_real_distribution<double> rho(0.3, 4.0), m(-2.0, 2.0), gamma(1.2, 3.0), tau(0.001, 0.1);
  const Mesh mesh = build_mesh(inst.graph, std::vector<int>(inst.graph.num_edges(), inst.elems));
  DofMap dofs = build_dofmap(inst.graph, mesh, inst.boundary);
  GasLaw law(gamma(rng), inst.graph);
  State prev;
  for (int k = 0; k < dofs.num_elements(); ++k) prev.rho.push_back(rho(rng));
  for (int f = 0; f < dofs.num_free(); ++f) prev.m_free.push_back(m(rng));
  for (int s = 0; s < dofs.num_boundary(); ++s) prev.m_boundary.push_back(m(rng));
  Linearization tilde;
  for (int k = 0; k < dofs.num_elements(); ++k) tilde.rho.push_back(rho(rng));
  std::vector<double> free(dofs.num_free());
  for (double& f : free) f = m(rng);
  std::vector<double> bnd(dofs.num_boundary());
  for (double& x : bnd) x = m(rng);
  tilde.m_nodal = expand_flux(dofs, free, bnd);
  const double floor = which % 3 == 2 ? 1.0 : 0.0;  // some instances exercise the density floor
  const double t = tau(rng);
  return {std::move(dofs), std::move(law), std::move(prev), std::move(tilde), t, floor};
}

Outcome ac7() {
  std::mt19937 rng(20240607);
  double worst = 0.0;
  int max_dofs = 0;
  bool ok = true;
  for (int trial = 0; trial < 10; ++trial) {
    const RandomSweep rs = random_sweep(trial, rng);
    const double t_new = 0.37;
    const SparseSystem sys = assemble_sweep(rs.dofs, rs.law, rs.prev, rs.tilde, rs.tau, t_new, rs.floor);
    const auto ref = acceptance::brute_force_sweep(rs.dofs, rs.law, rs.prev, rs.tilde.rho, rs.tilde.m_nodal,
                                                   rs.tau, t_new, rs.floor);
    const auto got = sys.to_dense();
    const int n = sys.size();
    max_dofs = std::max(max_dofs, n);
    ok = ok && n <= 20 && n == static_cast<int>(ref.matrix.size());
    double scale = 1.0;
    for (const auto& row : ref.matrix)
      for (double v : row) scale = std::max(scale, std::abs(v));
    for (double v : ref.rhs) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(got[i][j] - ref.matrix[i][j]) / scale);
      worst = std::max(worst, std::abs(sys.rhs()[i] - ref.rhs[i]) / scale);
    }
  }
  ok = ok && worst <= kAssemblyTol;
  return {ok, fmt("10 random states on 4 graphs, up to %d free DOFs; max entry difference %.2e "
                  "(relative to largest entry)", max_dofs, worst)};
}

Outcome ac8() {
  // The flux-dependent part of the sweep matrix without friction is the
  // convective pairing; it must be antisymmetric and vanish on the diagonal
  // pairing v = m.
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_sym = 0.0, worst_pair = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    RandomSweep rs = random_sweep(trial, rng);
    std::vector<Edge> edges = rs.dofs.graph().edges();
    for (Edge& e : edges) e.fric_b = 0.0;
    const NetworkGraph g(rs.dofs.graph().num_vertices(), edges);
    BoundarySpec spec;
    for (const auto& s : rs.dofs.boundary()) spec.emplace(s.vertex, s.condition);
    const DofMap dofs = build_dofmap(g, rs.dofs.mesh(), spec);

    Linearization at_rest = rs.tilde;
    std::fill(at_rest.m_nodal.begin(), at_rest.m_nodal.end(), 0.0);
    const auto full = assemble_sweep(dofs, rs.law, rs.prev, rs.tilde, rs.tau, 0.0, rs.floor).to_dense();
    const auto rest = assemble_sweep(dofs, rs.law, rs.prev, at_rest, rs.tau, 0.0, rs.floor).to_dense();
    const int n = static_cast<int>(full.size());
    double scale = 0.0;
    std::vector<std::vector<double>> c(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        c[i][j] = full[i][j] - rest[i][j];
        scale = std::max(scale, std::abs(c[i][j]));
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) worst_sym = std::max(worst_sym, std::abs(c[i][j] + c[j][i]) / scale);
    for (int k = 0; k < 10; ++k) {
      std::vector<double> x(n);
      for (double& v : x) v = u(rng);
      double pair = 0.0, mag = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          pair += x[i] * c[i][j] * x[j];
          mag += std::abs(x[i] * c[i][j] * x[j]);
        }
      worst_pair = std::max(worst_pair, std::abs(pair) / mag);
    }
  }
  const bool ok = worst_sym <= kAntisymTol && worst_pair <= kAntisymTol;
  return {ok, fmt("10 random states: max |C+C^T|/max|C| = %.2e, max |(Cm,m)|/sum|terms| = %.2e", worst_sym,
                  worst_pair)};
}

const std::vector<std::pair<std::string, std::pair<std::string, std::function<Outcome()>>>> kCriteria{
    {"AC1", {"mass conservation on all presets", ac1}},
    {"AC2", {"energy ledger on all presets", ac2}},
    {"AC3", {"shock tube energy ratio at t=2", ac3}},
    {"AC4", {"shock tube convergence to the dam-break solution", ac4}},
    {"AC5", {"friction pipe steady state vs shooting oracle", ac5}},
    {"AC6", {"junction steady state and exact Kirchhoff balance", ac6}},
    {"AC7", {"sweep assembly vs brute-force dense assembly", ac7}},
    {"AC8", {"antisymmetry of the convective pairing", ac8}},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [id, entry] : kCriteria) {
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = entry.second();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    std::printf("%s %s: %s | %s\n", id.c_str(), o.pass ? "PASS" : "FAIL", entry.first.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
