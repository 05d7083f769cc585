#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "gasnet/oracles.hpp"
#include "gasnet/scenario.hpp"
#include "gasnet/scheme.hpp"

namespace gasnet {

/// File could not be written; what() names the path.
class OutputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct DamBreakComparison {
  double l1_error = 0.0;       // int |rho_h - rho_exact| dx
  double shock_numeric = 0.0;  // interface with the steepest density jump
  double shock_exact = 0.0;
};

/// Compares a single-edge state with the dam-break solution centred at
/// display coordinate x_dam. Requires state.t > 0.
DamBreakComparison compare_dam_break(const DofMap& dofs, const State& state, double rho_left,
                                     double rho_right, double x_dam = 0.0);

/// max over element midpoints of |rho_h - profile| for a single edge.
double steady_pipe_error(const DofMap& dofs, const State& state, const SteadyProfile& profile);

/// Oracle inputs derived from a scenario (single edge, prescribed inflow).
SteadyPipeParams steady_pipe_params(const Scenario& scenario, const Simulation& sim);

/// Named oracle metrics for the scenario's configured oracle (empty for none).
std::map<std::string, double> oracle_metrics(const Scenario& scenario, const Simulation& sim,
                                             const State& final_state);

/// Writes snapshots.csv, diagnostics.csv, summary.json and, when an oracle is
/// configured, oracle.csv into dir (created if needed).
void write_outputs(const Trajectory& trajectory, const Scenario& scenario, const Simulation& sim,
                   const std::filesystem::path& dir);

}  // namespace gasnet
