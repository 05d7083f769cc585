#include "gasnet/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <vector>

#include "json.hpp"

namespace gasnet {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot open " + path.string() + " for writing");
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw OutputError("write failed: " + path.string());
}

double midpoint(const DofMap& dofs, EdgeId e, int k) {
  return dofs.graph().edge(e).x_start + (k + 0.5) * dofs.mesh().h[e];
}

double node_x(const DofMap& dofs, EdgeId e, int i) {
  const Edge& edge = dofs.graph().edge(e);
  return edge.x_start + (i == dofs.mesh().n_elems[e] ? edge.length : i * dofs.mesh().h[e]);
}

}  // namespace

DamBreakComparison compare_dam_break(const DofMap& dofs, const State& state, double rho_left,
                                     double rho_right, double x_dam) {
  if (dofs.graph().num_edges() != 1) throw InvalidInput("dam break comparison needs one edge");
  const RiemannSolution exact = solve_dam_break(rho_left, rho_right);
  const double t = state.t;
  if (!(t > 0.0)) throw InvalidInput("dam break comparison needs t > 0");

  const int n = dofs.mesh().n_elems[0];
  const double h = dofs.mesh().h[0];
  const double x0 = dofs.graph().edge(0).x_start;
  const double waves[3] = {x_dam + exact.head_speed * t, x_dam + exact.tail_speed * t,
                           x_dam + exact.shock_speed * t};

  DamBreakComparison out;
  for (int k = 0; k < n; ++k) {
    const double a = x0 + k * h, b = x0 + (k + 1) * h;
    std::vector<double> cuts{a};
    for (double w : waves)
      if (w > a && w < b) cuts.push_back(w);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    const double r = state.rho[k];
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      // the fan is smooth on each piece; 8 Gauss panels are plenty
      const double len = (cuts[p + 1] - cuts[p]) / 8.0;
      for (int q = 0; q < 8; ++q)
        out.l1_error += element_integrate(
            [&](double x) { return std::abs(r - exact.sample((x - x_dam) / t).first); },
            cuts[p] + q * len, len);
    }
  }

  double steepest = -1.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double jump = std::abs(state.rho[k + 1] - state.rho[k]);
    if (jump > steepest) {
      steepest = jump;
      out.shock_numeric = x0 + (k + 1) * h;
    }
  }
  out.shock_exact = waves[2];
  return out;
}

double steady_pipe_error(const DofMap& dofs, const State& state, const SteadyProfile& profile) {
  double err = 0.0;
  for (int k = 0; k < dofs.mesh().n_elems[0]; ++k)
    err = std::max(err, std::abs(state.rho[k] - profile.at(midpoint(dofs, 0, k))));
  return err;
}

SteadyPipeParams steady_pipe_params(const Scenario& scenario, const Simulation& sim) {
  const Edge& e = sim.graph.edge(0);
  SteadyPipeParams p;
  p.fric_b = e.fric_b;
  p.eos_c = e.eos_c;
  p.gamma = scenario.gamma;
  const auto it = scenario.boundary.find(e.from);
  p.mbar = it == scenario.boundary.end() ? 0.0 : it->second.value(scenario.t_end);
  p.target_mass = total_mass(sim.dofs, sim.initial);
  p.x_left = e.x_start;
  p.x_right = e.x_start + e.length;
  return p;
}

std::map<std::string, double> oracle_metrics(const Scenario& scenario, const Simulation& sim,
                                             const State& final_state) {
  std::map<std::string, double> m;
  switch (scenario.oracle) {
    case OracleKind::None:
      break;
    case OracleKind::DamBreak: {
      if (!(final_state.t > 0.0)) break;
      const auto& ic = scenario.initial.at(0);
      const auto c = compare_dam_break(sim.dofs, final_state, ic.left.rho, ic.right.rho, ic.x_split);
      m["t"] = final_state.t;
      m["l1_rho_error"] = c.l1_error;
      m["shock_position_numeric"] = c.shock_numeric;
      m["shock_position_exact"] = c.shock_exact;
      m["shock_position_error"] = std::abs(c.shock_numeric - c.shock_exact);
      break;
    }
    case OracleKind::SteadyPipe: {
      const SteadyProfile prof = steady_pipe_shooting(steady_pipe_params(scenario, sim));
      const double err = steady_pipe_error(sim.dofs, final_state, prof);
      const double mean = prof.mass / (prof.x.back() - prof.x.front());
      m["linf_rho_error"] = err;
      m["rho_mean"] = mean;
      m["relative_linf_rho_error"] = err / mean;
      m["oracle_rho_left"] = prof.rho.front();
      m["oracle_rho_right"] = prof.rho.back();
      break;
    }
    case OracleKind::JunctionSteady: {
      const JunctionSteady js =
          junction_steady(sim.graph, scenario.gamma, total_mass(sim.dofs, sim.initial));
      double drho = 0.0;
      for (int k = 0; k < sim.dofs.num_elements(); ++k)
        drho = std::max(drho, std::abs(final_state.rho[k] - js.rhobar[sim.dofs.element_edge(k)]));
      double mmax = 0.0;
      for (double v : flux_nodal(sim.dofs, final_state)) mmax = std::max(mmax, std::abs(v));
      m["linf_rho_error"] = drho;
      m["linf_m"] = mmax;
      for (std::size_t e = 0; e < js.rhobar.size(); ++e)
        m["rhobar_edge" + std::to_string(e)] = js.rhobar[e];
      break;
    }
  }
  return m;
}

namespace {

void write_snapshots(const Trajectory& traj, const DofMap& dofs, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "t,edge_id,x,rho,m\n";
  struct Row {
    double x;
    bool is_rho;
    double v;
  };
  for (const State& s : traj.snapshots) {
    const auto nodal = flux_nodal(dofs, s);
    for (const Edge& e : dofs.graph().edges()) {
      const int n = dofs.mesh().n_elems[e.id];
      std::vector<Row> rows;
      rows.reserve(2 * n + 1);
      for (int k = 0; k < n; ++k) rows.push_back({midpoint(dofs, e.id, k), true, s.rho[dofs.element_index(e.id, k)]});
      for (int i = 0; i <= n; ++i) rows.push_back({node_x(dofs, e.id, i), false, nodal[dofs.node_index(e.id, i)]});
      std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.x < b.x; });
      const std::string prefix = num(s.t) + "," + std::to_string(e.id) + ",";
      for (const Row& r : rows)
        out << prefix << num(r.x) << ',' << (r.is_rho ? num(r.v) : "") << ','
            << (r.is_rho ? "" : num(r.v)) << '\n';
    }
  }
  close_out(out, path);
}

void write_diagnostics(const Trajectory& traj, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "step,t,mass,energy,dissipation,cumulative_budget,nonlinear_residual,min_rho\n";
  for (const auto& r : traj.records)
    out << r.step << ',' << num(r.t) << ',' << num(r.mass) << ',' << num(r.energy) << ','
        << num(r.dissipation) << ',' << num(r.cumulative_budget) << ','
        << num(r.nonlinear_residual) << ',' << num(r.min_rho) << '\n';
  close_out(out, path);
}

void write_oracle(const Scenario& scenario, const Simulation& sim, const State& final_state,
                  const std::filesystem::path& path) {
  const DofMap& dofs = sim.dofs;
  std::vector<std::pair<double, double>> values;  // per element (rho, m)
  switch (scenario.oracle) {
    case OracleKind::None:
      return;
    case OracleKind::DamBreak: {
      if (!(final_state.t > 0.0)) return;
      const auto& ic = scenario.initial.at(0);
      const RiemannSolution exact = solve_dam_break(ic.left.rho, ic.right.rho);
      for (int k = 0; k < dofs.num_elements(); ++k)
        values.push_back(exact.sample((midpoint(dofs, 0, k) - ic.x_split) / final_state.t));
      break;
    }
    case OracleKind::SteadyPipe: {
      const SteadyPipeParams p = steady_pipe_params(scenario, sim);
      const SteadyProfile prof = steady_pipe_shooting(p);
      for (int k = 0; k < dofs.num_elements(); ++k)
        values.emplace_back(prof.at(midpoint(dofs, 0, k)), p.mbar);
      break;
    }
    case OracleKind::JunctionSteady: {
      const JunctionSteady js =
          junction_steady(sim.graph, scenario.gamma, total_mass(dofs, sim.initial));
      for (int k = 0; k < dofs.num_elements(); ++k)
        values.emplace_back(js.rhobar[dofs.element_edge(k)], 0.0);
      break;
    }
  }
  auto out = open_out(path);
  out << "t,edge_id,x,rho,m\n";
  for (int k = 0; k < dofs.num_elements(); ++k) {
    const EdgeId e = dofs.element_edge(k);
    out << num(final_state.t) << ',' << e << ',' << num(midpoint(dofs, e, k - dofs.element_offset(e)))
        << ',' << num(values[k].first) << ',' << num(values[k].second) << '\n';
  }
  close_out(out, path);
}

nlohmann::json record_json(const DiagnosticsRecord& r) {
  return {{"step", r.step},
          {"t", r.t},
          {"mass", r.mass},
          {"energy", r.energy},
          {"dissipation", r.dissipation},
          {"cumulative_budget", r.cumulative_budget},
          {"nonlinear_residual", r.nonlinear_residual},
          {"min_rho", r.min_rho},
          {"boundary_work", r.boundary_work},
          {"sweeps", r.sweeps},
          {"max_rho_change", r.max_rho_change}};
}

}  // namespace

void write_outputs(const Trajectory& traj, const Scenario& scenario, const Simulation& sim,
                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create directory " + dir.string() + ": " + ec.message());

  write_snapshots(traj, sim.dofs, dir / "snapshots.csv");
  write_diagnostics(traj, dir / "diagnostics.csv");

  nlohmann::json summary;
  summary["scenario"] = nlohmann::json::parse(serialize_scenario(scenario));
  summary["status"] = traj.completed() ? "completed" : "failed";
  if (traj.failure) {
    summary["failure"] = {{"kind", traj.failure->kind},
                          {"step", traj.failure->step},
                          {"t", traj.failure->t},
                          {"message", traj.failure->message}};
  }
  summary["steady_reached"] = traj.steady_reached;
  summary["num_elements"] = sim.dofs.num_elements();
  summary["num_free_flux_dofs"] = sim.dofs.num_free();
  if (!traj.records.empty()) {
    const auto& first = traj.records.front();
    const auto& last = traj.records.back();
    summary["final"] = record_json(last);
    summary["energy_ratio_final"] = first.energy != 0.0 ? last.energy / first.energy : 0.0;
    double drift = 0.0, budget = -std::numeric_limits<double>::infinity();
    for (const auto& r : traj.records) {
      drift = std::max(drift, std::abs(r.mass - first.mass) / std::abs(first.mass));
      budget = std::max(budget, r.cumulative_budget);
    }
    summary["max_relative_mass_drift"] = drift;
    summary["max_cumulative_budget"] = budget;
  }
  if (scenario.oracle != OracleKind::None) {
    nlohmann::json oracle{{"kind", to_string(scenario.oracle)}};
    try {
      for (const auto& [k, v] : oracle_metrics(scenario, sim, traj.final_state)) oracle[k] = v;
      write_oracle(scenario, sim, traj.final_state, dir / "oracle.csv");
    } catch (const OutputError&) {
      throw;
    } catch (const std::exception& ex) {
      oracle["error"] = ex.what();
    }
    summary["oracle"] = oracle;
  }

  const auto path = dir / "summary.json";
  auto out = open_out(path);
  out << summary.dump(2) << '\n';
  close_out(out, path);
}

}  // namespace gasnet
