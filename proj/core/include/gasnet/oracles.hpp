#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "gasnet/network.hpp"

namespace gasnet {

/// Exact solution of the dam-break Riemann problem for p = rho^2 / 2 (the
/// shallow-water system with g = 1): a left rarefaction, a constant
/// intermediate state and a right shock. Both sides start at rest.
struct RiemannSolution {
  double rho_left = 0.0;
  double rho_right = 0.0;
  double rho_star = 0.0;
  double u_star = 0.0;
  double m_star = 0.0;
  double head_speed = 0.0;   // left edge of the rarefaction fan
  double tail_speed = 0.0;   // right edge of the rarefaction fan
  double shock_speed = 0.0;

  /// (rho, m) at similarity coordinate xi = x / t.
  std::pair<double, double> sample(double xi) const;
};

/// Intermediate state by bisection on the two-wave matching condition.
/// Throws InvalidInput unless rho_left > rho_right > 0.
RiemannSolution solve_dam_break(double rho_left, double rho_right);

/// (rho, m) at (x, t) for a dam at x = 0. Requires t > 0.
std::pair<double, double> dam_break_exact(double rho_left, double rho_right, double x, double t);

class BracketFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NonMonotone : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SteadyPipeParams {
  double fric_b = 100.0;
  double eos_c = 0.5;
  double gamma = 2.0;
  double mbar = 1.0;
  double target_mass = 110.0;
  double x_left = -5.0;
  double x_right = 5.0;
  int grid_n = 100000;
  /// Sign of the friction source in the steady momentum balance. The momentum
  /// equation gives -1 (pressure falls in flow direction).
  double friction_sign = -1.0;
};

struct SteadyProfile {
  std::vector<double> x;
  std::vector<double> rho;
  double rho_left = 0.0;
  double mass = 0.0;

  /// Linear interpolation of the profile.
  double at(double xq) const;
};

/// Steady density for constant flux mbar:
///   d/dx (mbar^2 / rho + p(rho)) = friction_sign * b |mbar| mbar / rho,
/// integrated with Heun's method from x_left on grid_n points; the left value
/// is found by bisection so that the trapezoidal mass matches target_mass to
/// 1e-8 relative.
SteadyProfile steady_pipe_shooting(const SteadyPipeParams& params);

struct JunctionSteady {
  double mbar = 0.0;
  std::vector<double> rhobar;  // per edge
  double enthalpy = 0.0;       // common P'_e(rhobar_e)
};

/// Rest state of a closed network with the given total mass: zero flux and a
/// common enthalpy P'_e(rho_e) on all pipes. With equal c_e this is
/// rho = initial_mass / total_length on every edge.
JunctionSteady junction_steady(const NetworkGraph& graph, double gamma, double initial_mass);

}  // namespace gasnet
