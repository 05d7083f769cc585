#include "gasnet/diagnostics.hpp"

#include <algorithm>
#include <limits>

namespace gasnet {

double min_density(const State& s) {
  return s.rho.empty() ? std::numeric_limits<double>::quiet_NaN()
                       : *std::min_element(s.rho.begin(), s.rho.end());
}

double total_mass(const DofMap& dofs, std::span<const double> rho) {
  double mass = 0.0;
  for (int k = 0; k < dofs.num_elements(); ++k) mass += dofs.h(k) * rho[k];
  return mass;
}

double total_mass(const DofMap& dofs, const State& state) { return total_mass(dofs, state.rho); }

double total_energy(const DofMap& dofs, const GasLaw& law, std::span<const double> rho,
                    std::span<const double> m_nodal) {
  double energy = 0.0;
  for (const Edge& e : dofs.graph().edges()) {
    const double h = dofs.mesh().h[e.id];
    for (int k = 0; k < dofs.mesh().n_elems[e.id]; ++k) {
      const double r = rho[dofs.element_index(e.id, k)];
      const double m0 = m_nodal[dofs.node_index(e.id, k)];
      const double m1 = m_nodal[dofs.node_index(e.id, k) + 1];
      const double pot = law.potential(e.id, r);
      energy += element_integrate(
          [&](double xi) {
            const double m = m0 + (m1 - m0) * xi;
            return m * m / (2.0 * r) + pot;
          },
          0.0, 1.0) * h;
    }
  }
  return energy;
}

double total_energy(const DofMap& dofs, const GasLaw& law, const State& state) {
  return total_energy(dofs, law, state.rho, flux_nodal(dofs, state));
}

double dissipation(const DofMap& dofs, std::span<const double> rho,
                   std::span<const double> m_nodal) {
  double d = 0.0;
  for (const Edge& e : dofs.graph().edges()) {
    const double h = dofs.mesh().h[e.id];
    for (int k = 0; k < dofs.mesh().n_elems[e.id]; ++k) {
      const double r = rho[dofs.element_index(e.id, k)];
      if (!(r > 0.0)) throw PositivityLost("dissipation: nonpositive density");
      const double m0 = m_nodal[dofs.node_index(e.id, k)];
      const double m1 = m_nodal[dofs.node_index(e.id, k) + 1];
      const double inv_r2 = 1.0 / (r * r);
      if (e.visc_a != 0.0) {
        const double dm = (m1 - m0) / h;
        d += e.visc_a * dm * dm * inv_r2 * h;
      }
      if (e.fric_b != 0.0) {
        const double cube = integrate_abs_linear(m0, m1, [&](double xi) {
          const double m = m0 + (m1 - m0) * xi;
          return m * m;
        });
        d += e.fric_b * cube * inv_r2 * h;
      }
    }
  }
  return d;
}

double dissipation(const DofMap& dofs, const State& state) {
  return dissipation(dofs, state.rho, flux_nodal(dofs, state));
}

double boundary_inflow(const DofMap& dofs, std::span<const double> m_boundary) {
  double inflow = 0.0;
  for (int s = 0; s < dofs.num_boundary(); ++s)
    inflow -= m_boundary[s] * dofs.boundary()[s].sign;
  return inflow;
}

BudgetLedger budget_check(std::span<const DiagnosticsRecord> records, double eps_rel) {
  BudgetLedger ledger;
  if (records.empty()) return ledger;
  ledger.eps = eps_rel * std::abs(records.front().energy);
  ledger.max_budget = -std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    ledger.budget.push_back(r.cumulative_budget);
    ledger.max_budget = std::max(ledger.max_budget, r.cumulative_budget);
    if (r.cumulative_budget > ledger.eps) ledger.flagged_steps.push_back(r.step);
  }
  return ledger;
}

}  // namespace gasnet
