#pragma once

#include <vector>

#include "gasnet/femspace.hpp"

namespace gasnet {

/// Discrete solution at one time level.
///
/// `rho` holds one P0 coefficient per element, `m_free` the independent P1
/// flux DOFs and `m_boundary` the flux values at the boundary vertices, one per
/// DofMap boundary slot. Accepted states have rho > 0 everywhere.
struct State {
  double t = 0.0;
  std::vector<double> rho;
  std::vector<double> m_free;
  std::vector<double> m_boundary;

  bool operator==(const State&) const = default;
};

/// Full nodal flux vector of a state.
inline std::vector<double> flux_nodal(const DofMap& dofs, const State& s) {
  return expand_flux(dofs, s.m_free, s.m_boundary);
}

double min_density(const State& s);

}  // namespace gasnet
