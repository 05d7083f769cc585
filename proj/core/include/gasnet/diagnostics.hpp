#pragma once

#include <span>
#include <vector>

#include "gasnet/eos.hpp"
#include "gasnet/femspace.hpp"
#include "gasnet/state.hpp"

namespace gasnet {

/// Per-step bookkeeping of the conserved and dissipated quantities.
struct DiagnosticsRecord {
  int step = 0;
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;
  /// E^n + tau * sum_{k<=n} (D^k - W^k) - E^0, W^k the energy supplied through
  /// prescribed boundary fluxes (zero for closed networks).
  double cumulative_budget = 0.0;
  double nonlinear_residual = 0.0;
  double min_rho = 0.0;
  double boundary_work = 0.0;
  int sweeps = 0;
  /// max_K |rho^n_K - rho^{n-1}_K|
  double max_rho_change = 0.0;
};

/// Sum_K h_K rho_K.
double total_mass(const DofMap& dofs, std::span<const double> rho);
double total_mass(const DofMap& dofs, const State& state);

/// Sum_K int_K m^2/(2 rho) + P(rho) dx.
double total_energy(const DofMap& dofs, const GasLaw& law, std::span<const double> rho,
                    std::span<const double> m_nodal);
double total_energy(const DofMap& dofs, const GasLaw& law, const State& state);

/// Sum_K int_K a (m')^2/rho^2 + b |m|^3/rho^2 dx; |m|^3 is integrated exactly by
/// splitting at the root of m inside an element.
double dissipation(const DofMap& dofs, std::span<const double> rho,
                   std::span<const double> m_nodal);
double dissipation(const DofMap& dofs, const State& state);

/// Net mass inflow rate through the boundary, -sum_b m_b n_e(b).
double boundary_inflow(const DofMap& dofs, std::span<const double> m_boundary);

struct BudgetLedger {
  std::vector<double> budget;     // one per record
  std::vector<int> flagged_steps; // steps with budget > eps
  double eps = 0.0;
  double max_budget = 0.0;
};

/// Flags every step whose cumulative budget exceeds eps_rel * E^0.
BudgetLedger budget_check(std::span<const DiagnosticsRecord> records, double eps_rel = 1e-8);

}  // namespace gasnet
