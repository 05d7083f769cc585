#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gasnet/diagnostics.hpp"
#include "gasnet/eos.hpp"
#include "gasnet/femspace.hpp"
#include "gasnet/linalg.hpp"
#include "gasnet/state.hpp"

namespace gasnet {

struct StepConfig {
  double tau = 0.005;
  /// Sweeps per step when no tolerance is set.
  int fixpoint_iters = 2;
  /// When set, sweep until the relative nonlinear residual drops below it
  /// (or fixpoint_max_iters is reached).
  std::optional<double> fixpoint_tol;
  int fixpoint_max_iters = 100;
  /// Lower bound applied to the linearization density in denominators; 0 disables.
  double rho_floor = 0.0;

  void validate() const;
};

/// Initial data as functions of (edge, local coordinate in [0, length]).
using EdgeFunction = std::function<double(EdgeId, double)>;

/// rho: element midpoint values of rho0. m: nodal interpolation of m0, with the
/// Kirchhoff-dependent junction DOFs recomputed and closed ends set to zero.
State project_initial(const DofMap& dofs, const EdgeFunction& rho0, const EdgeFunction& m0,
                      double t0 = 0.0);

/// Density from the discrete continuity equation:
/// rho_K = rho_prev_K - tau/h_K (m(x_right) - m(x_left)).
std::vector<double> condensed_density(const DofMap& dofs, std::span<const double> rho_prev,
                                      std::span<const double> m_nodal, double tau);

/// Linearization point of one sweep. rho are the raw element values; m_nodal
/// the full nodal flux.
struct Linearization {
  std::vector<double> rho;
  std::vector<double> m_nodal;
};

/// Assembles the flux-only system of one fixed-point sweep (density condensed
/// out) over the free flux DOFs. Boundary values at t_new enter the rhs.
SparseSystem assemble_sweep(const DofMap& dofs, const GasLaw& law, const State& prev,
                            const Linearization& tilde, double tau, double t_new,
                            double rho_floor = 0.0);

/// Residual of the fully discrete nonlinear equations at (rho, m) given the
/// previous level.
struct Residual {
  std::vector<double> node;  // tested with each P1 hat function
  std::vector<double> free;  // tested with each free basis function of V_h
  double scale = 0.0;        // largest sum of absolute term contributions
  double relative = 0.0;     // |free|_inf / scale
};

Residual nonlinear_residual(const DofMap& dofs, const GasLaw& law, const State& prev,
                            std::span<const double> rho, std::span<const double> m_nodal,
                            double tau);

struct StepResult {
  State state;
  int sweeps = 0;
  double residual = 0.0;
  /// sum_b m_b * (residual tested with the hat function at b); energy supplied
  /// through prescribed boundary fluxes over the step, per unit time.
  double boundary_work = 0.0;
};

/// One time step by the fixed-point iteration. Throws PositivityLost if the
/// accepted density is not positive, SingularMatrix / ResidualTooLarge from the solve.
StepResult fixed_point_step(const DofMap& dofs, const GasLaw& law, const State& prev,
                            const StepConfig& config);

struct RunConfig {
  StepConfig step;
  double t_end = 0.0;
  std::vector<double> snapshot_times;
  /// Stop once max_K |rho^n - rho^{n-1}| <= steady_tol.
  std::optional<double> steady_tol;
  /// Called after every accepted step with the new state and its nodal flux.
  std::function<void(const State&, std::span<const double>)> on_step;
};

struct Failure {
  std::string kind;  // "PositivityLost", "Singular", "ResidualTooLarge"
  int step = 0;
  double t = 0.0;
  std::string message;
};

struct Trajectory {
  std::vector<State> snapshots;
  std::vector<DiagnosticsRecord> records;  // records[0] is the initial state
  State final_state;
  std::optional<Failure> failure;
  bool steady_reached = false;

  bool completed() const { return !failure.has_value(); }
};

DiagnosticsRecord initial_record(const DofMap& dofs, const GasLaw& law, const State& s);

/// Time loop with fixed tau from the initial state's t to t_end.
Trajectory run(const DofMap& dofs, const GasLaw& law, const State& initial,
               const RunConfig& config);

}  // namespace gasnet
