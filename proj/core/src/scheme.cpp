#include "gasnet/scheme.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace gasnet {

void StepConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidInput("tau must be positive");
  if (fixpoint_iters < 1) throw InvalidInput("fixpoint_iters must be at least 1");
  if (fixpoint_tol && !(*fixpoint_tol > 0.0)) throw InvalidInput("fixpoint_tol must be positive");
  if (fixpoint_max_iters < 1) throw InvalidInput("fixpoint_max_iters must be at least 1");
  if (!(rho_floor >= 0.0)) throw InvalidInput("rho_floor must be nonnegative");
}

State project_initial(const DofMap& dofs, const EdgeFunction& rho0, const EdgeFunction& m0,
                      double t0) {
  State s;
  s.t = t0;
  s.rho.resize(dofs.num_elements());
  std::vector<double> nodal(dofs.num_nodes());
  for (const Edge& e : dofs.graph().edges()) {
    const int n = dofs.mesh().n_elems[e.id];
    const double h = dofs.mesh().h[e.id];
    for (int k = 0; k < n; ++k) {
      const double x = (k + 0.5) * h;
      const double r = rho0(e.id, x);
      if (!(r > 0.0))
        throw InvalidInput("initial density must be positive (edge " + std::to_string(e.id) +
                           ", x = " + std::to_string(x) + ")");
      s.rho[dofs.element_index(e.id, k)] = r;
    }
    for (int i = 0; i <= n; ++i)
      nodal[dofs.node_index(e.id, i)] = m0(e.id, i == n ? e.length : i * h);
  }
  s.m_free = restrict_flux(dofs, nodal);
  for (const auto& slot : dofs.boundary())
    s.m_boundary.push_back(slot.condition.kind() == BoundaryCondition::Kind::Closed
                               ? 0.0
                               : nodal[slot.node]);
  return s;
}

std::vector<double> condensed_density(const DofMap& dofs, std::span<const double> rho_prev,
                                      std::span<const double> m_nodal, double tau) {
  std::vector<double> rho(dofs.num_elements());
  for (const Edge& e : dofs.graph().edges()) {
    const double h = dofs.mesh().h[e.id];
    for (int k = 0; k < dofs.mesh().n_elems[e.id]; ++k) {
      const int elem = dofs.element_index(e.id, k);
      const int left = dofs.node_index(e.id, k);
      rho[elem] = rho_prev[elem] - tau / h * (m_nodal[left + 1] - m_nodal[left]);
    }
  }
  return rho;
}

namespace {

using Local2 = std::array<std::array<double, 2>, 2>;

constexpr std::array<double, 2> kSlope{-1.0, 1.0};  // h * phi_i'

double hat(int i, double xi) { return i == 0 ? 1.0 - xi : xi; }

// Element-local contributions; `fn(edge, k, elem, left_node)`.
template <class F>
void for_each_element(const DofMap& dofs, F&& fn) {
  for (const Edge& e : dofs.graph().edges())
    for (int k = 0; k < dofs.mesh().n_elems[e.id]; ++k)
      fn(e, k, dofs.element_index(e.id, k), dofs.node_index(e.id, k));
}

}  // namespace

SparseSystem assemble_sweep(const DofMap& dofs, const GasLaw& law, const State& prev,
                            const Linearization& tilde, double tau, double t_new,
                            double rho_floor) {
  const std::vector<double> g = dofs.boundary_values(t_new);
  const std::vector<double> m_prev = flux_nodal(dofs, prev);
  const auto& maps = dofs.node_maps();

  SparseSystem sys(dofs.num_free());
  for_each_element(dofs, [&](const Edge& e, int, int elem, int left) {
    const double h = dofs.mesh().h[e.id];
    const double rp = prev.rho[elem];
    if (!(rp > 0.0)) throw PositivityLost("previous density not positive in element " +
                                          std::to_string(elem));
    const double rt_raw = tilde.rho[elem];
    const double rt = std::max(rho_floor, rt_raw);
    if (!(rt > 0.0)) throw PositivityLost("linearization density not positive in element " +
                                          std::to_string(elem));
    const double inv_rt2 = 1.0 / (rt * rt);
    const double p_over_rho = law.potential_prime_over_rho(e.id, rt);
    const double mt0 = tilde.m_nodal[left], mt1 = tilde.m_nodal[left + 1];
    const double mp0 = m_prev[left], mp1 = m_prev[left + 1];

    Local2 a{};
    std::array<double, 2> r{};
    std::array<double, 2> w{};  // int_0^1 m~ phi_i dxi
    for (int i = 0; i < 2; ++i) {
      w[i] = element_integrate([&](double xi) { return (mt0 + (mt1 - mt0) * xi) * hat(i, xi); },
                               0.0, 1.0);
      const double wp = element_integrate(
          [&](double xi) { return (mp0 + (mp1 - mp0) * xi) * hat(i, xi); }, 0.0, 1.0);
      r[i] = h / tau * (wp / rp + (rt_raw - rp) * 0.5 * inv_rt2 * w[i]);
      r[i] += p_over_rho * rp * kSlope[i];
    }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double mass =
            element_integrate([&](double xi) { return hat(i, xi) * hat(j, xi); }, 0.0, 1.0) * h;
        double v = mass / (tau * rp);
        // convective pair: -(m~/(2 rho~^2) m, v') + (m~/(2 rho~^2) m', v)
        v += 0.5 * inv_rt2 * (kSlope[j] * w[i] - kSlope[i] * w[j]);
        // pressure with the condensed density
        v += p_over_rho * tau / h * kSlope[i] * kSlope[j];
        v += e.visc_a * inv_rt2 / h * kSlope[i] * kSlope[j];
        if (e.fric_b != 0.0)
          v += e.fric_b * inv_rt2 * h *
               integrate_abs_linear(mt0, mt1, [&](double xi) { return hat(i, xi) * hat(j, xi); });
        a[i][j] = v;
      }

    std::array<double, 2> gl{};
    for (int j = 0; j < 2; ++j) {
      const int slot = maps[left + j].boundary_slot;
      gl[j] = slot >= 0 ? g[slot] : 0.0;
    }
    for (int i = 0; i < 2; ++i) {
      const double ri = r[i] - a[i][0] * gl[0] - a[i][1] * gl[1];
      for (const FreeTerm& ti : maps[left + i].terms) {
        sys.add_rhs(ti.free, ti.coeff * ri);
        for (int j = 0; j < 2; ++j)
          for (const FreeTerm& tj : maps[left + j].terms)
            sys.accumulate(ti.free, tj.free, ti.coeff * tj.coeff * a[i][j]);
      }
    }
  });
  sys.finalize();
  return sys;
}

Residual nonlinear_residual(const DofMap& dofs, const GasLaw& law, const State& prev,
                            std::span<const double> rho, std::span<const double> m_nodal,
                            double tau) {
  const std::vector<double> m_prev = flux_nodal(dofs, prev);
  Residual res;
  res.node.assign(dofs.num_nodes(), 0.0);
  std::vector<double> magnitude(dofs.num_nodes(), 0.0);

  for_each_element(dofs, [&](const Edge& e, int, int elem, int left) {
    const double h = dofs.mesh().h[e.id];
    const double rp = prev.rho[elem];
    const double r = rho[elem];
    if (!(r > 0.0) || !(rp > 0.0)) throw PositivityLost("residual: nonpositive density");
    const double inv_r2 = 1.0 / (r * r);
    const double enthalpy_p = law.potential_prime(e.id, r);
    const double m0 = m_nodal[left], m1 = m_nodal[left + 1];
    const double mp0 = m_prev[left], mp1 = m_prev[left + 1];
    const double dm = (m1 - m0) / h;
    auto m_at = [&](double xi) { return m0 + (m1 - m0) * xi; };
    auto mp_at = [&](double xi) { return mp0 + (mp1 - mp0) * xi; };

    for (int i = 0; i < 2; ++i) {
      const double dphi = kSlope[i] / h;
      const double t_time = h * element_integrate(
          [&](double xi) {
            const double m = m_at(xi);
            return ((m - mp_at(xi)) / (tau * rp) - 0.5 * m * inv_r2 * (r - rp) / tau) *
                   hat(i, xi);
          },
          0.0, 1.0);
      const double t_kin = -h * dphi * element_integrate(
          [&](double xi) { const double m = m_at(xi); return 0.5 * m * m * inv_r2; }, 0.0, 1.0);
      const double t_pres = -h * dphi * enthalpy_p;
      const double t_visc = h * dphi * e.visc_a * inv_r2 * dm;
      const double t_conv = h * element_integrate(
          [&](double xi) { return 0.5 * m_at(xi) * inv_r2 * dm * hat(i, xi); }, 0.0, 1.0);
      const double t_fric =
          e.fric_b == 0.0
              ? 0.0
              : h * e.fric_b * inv_r2 *
                    integrate_abs_linear(m0, m1, [&](double xi) { return m_at(xi) * hat(i, xi); });
      res.node[left + i] += t_time + t_kin + t_pres + t_visc + t_conv + t_fric;
      magnitude[left + i] += std::abs(t_time) + std::abs(t_kin) + std::abs(t_pres) +
                             std::abs(t_visc) + std::abs(t_conv) + std::abs(t_fric);
    }
  });

  res.free.assign(dofs.num_free(), 0.0);
  const auto& maps = dofs.node_maps();
  for (int node = 0; node < dofs.num_nodes(); ++node) {
    for (const FreeTerm& t : maps[node].terms) res.free[t.free] += t.coeff * res.node[node];
    res.scale = std::max(res.scale, magnitude[node]);
  }
  double worst = 0.0;
  for (double f : res.free) worst = std::max(worst, std::abs(f));
  res.relative = res.scale > 0.0 ? worst / res.scale : 0.0;
  return res;
}

StepResult fixed_point_step(const DofMap& dofs, const GasLaw& law, const State& prev,
                            const StepConfig& config) {
  config.validate();
  const double tau = config.tau;
  const double t_new = prev.t + tau;
  const std::vector<double> g = dofs.boundary_values(t_new);

  Linearization tilde{prev.rho, flux_nodal(dofs, prev)};
  std::vector<double> m_free(dofs.num_free(), 0.0);
  std::optional<Residual> res;

  const int max_sweeps = config.fixpoint_tol ? config.fixpoint_max_iters : config.fixpoint_iters;
  int sweeps = 0;
  while (sweeps < max_sweeps) {
    const SparseSystem sys = assemble_sweep(dofs, law, prev, tilde, tau, t_new, config.rho_floor);
    if (dofs.num_free() > 0) m_free = solve(sys);
    tilde.m_nodal = expand_flux(dofs, m_free, g);
    tilde.rho = condensed_density(dofs, prev.rho, tilde.m_nodal, tau);
    ++sweeps;
    res.reset();
    if (config.fixpoint_tol &&
        *std::min_element(tilde.rho.begin(), tilde.rho.end()) > 0.0) {
      res = nonlinear_residual(dofs, law, prev, tilde.rho, tilde.m_nodal, tau);
      if (res->relative <= *config.fixpoint_tol) break;
    }
  }

  const auto min_it = std::min_element(tilde.rho.begin(), tilde.rho.end());
  if (!(*min_it > 0.0))
    throw PositivityLost("density " + std::to_string(*min_it) + " in element " +
                         std::to_string(min_it - tilde.rho.begin()) + " at t = " +
                         std::to_string(t_new));
  if (!res) res = nonlinear_residual(dofs, law, prev, tilde.rho, tilde.m_nodal, tau);

  StepResult out;
  out.state.t = t_new;
  out.state.rho = std::move(tilde.rho);
  out.state.m_free = std::move(m_free);
  out.state.m_boundary = g;
  out.sweeps = sweeps;
  out.residual = res->relative;
  for (int s = 0; s < dofs.num_boundary(); ++s)
    out.boundary_work += g[s] * res->node[dofs.boundary()[s].node];
  return out;
}

DiagnosticsRecord initial_record(const DofMap& dofs, const GasLaw& law, const State& s) {
  const std::vector<double> nodal = flux_nodal(dofs, s);
  DiagnosticsRecord rec;
  rec.step = 0;
  rec.t = s.t;
  rec.mass = total_mass(dofs, s.rho);
  rec.energy = total_energy(dofs, law, s.rho, nodal);
  rec.dissipation = dissipation(dofs, s.rho, nodal);
  rec.min_rho = min_density(s);
  return rec;
}

Trajectory run(const DofMap& dofs, const GasLaw& law, const State& initial,
               const RunConfig& config) {
  config.step.validate();
  const double tau = config.step.tau;
  const double t0 = initial.t;
  if (!(config.t_end >= t0)) throw InvalidInput("end time before start time");

  std::vector<double> snap_times = config.snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  std::size_t next_snap = 0;

  Trajectory traj;
  traj.final_state = initial;
  auto take_snapshots = [&](const State& s, bool last) {
    while (next_snap < snap_times.size() &&
           (s.t >= snap_times[next_snap] - 0.5 * tau || last)) {
      if (traj.snapshots.empty() || traj.snapshots.back().t != s.t) traj.snapshots.push_back(s);
      ++next_snap;
      if (last) break;
    }
  };

  traj.records.push_back(initial_record(dofs, law, initial));
  const double e0 = traj.records.front().energy;
  take_snapshots(initial, false);

  const long long steps =
      static_cast<long long>(std::ceil((config.t_end - t0) / tau - 1e-9));
  double budget_sum = 0.0;
  State current = initial;
  for (long long n = 1; n <= steps; ++n) {
    StepResult step;
    try {
      step = fixed_point_step(dofs, law, current, config.step);
    } catch (const PositivityLost& ex) {
      traj.failure = Failure{"PositivityLost", static_cast<int>(n), current.t + tau, ex.what()};
    } catch (const SingularMatrix& ex) {
      traj.failure = Failure{"Singular", static_cast<int>(n), current.t + tau, ex.what()};
    } catch (const ResidualTooLarge& ex) {
      traj.failure = Failure{"ResidualTooLarge", static_cast<int>(n), current.t + tau, ex.what()};
    }
    if (traj.failure) break;

    step.state.t = t0 + static_cast<double>(n) * tau;
    const std::vector<double> nodal = flux_nodal(dofs, step.state);
    DiagnosticsRecord rec;
    rec.step = static_cast<int>(n);
    rec.t = step.state.t;
    rec.mass = total_mass(dofs, step.state.rho);
    rec.energy = total_energy(dofs, law, step.state.rho, nodal);
    rec.dissipation = dissipation(dofs, step.state.rho, nodal);
    rec.boundary_work = step.boundary_work;
    budget_sum += tau * (rec.dissipation - rec.boundary_work);
    rec.cumulative_budget = rec.energy - e0 + budget_sum;
    rec.nonlinear_residual = step.residual;
    rec.min_rho = min_density(step.state);
    rec.sweeps = step.sweeps;
    for (std::size_t k = 0; k < current.rho.size(); ++k)
      rec.max_rho_change =
          std::max(rec.max_rho_change, std::abs(step.state.rho[k] - current.rho[k]));
    traj.records.push_back(rec);
    if (config.on_step) config.on_step(step.state, nodal);

    current = std::move(step.state);
    if (config.steady_tol && rec.max_rho_change <= *config.steady_tol) {
      traj.steady_reached = true;
      break;
    }
    take_snapshots(current, false);
  }
  traj.final_state = current;
  if (traj.failure || traj.steady_reached) take_snapshots(current, true);
  return traj;
}

}  // namespace gasnet
