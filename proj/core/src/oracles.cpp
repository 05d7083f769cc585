#include "gasnet/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gasnet {

namespace {

// Velocity jump across each wave for g = 1 shallow water, as a function of the
// intermediate depth. Left rarefaction and right shock.
double matching(double rho_left, double rho_right, double rho) {
  const double u_rarefaction = 2.0 * (std::sqrt(rho_left) - std::sqrt(rho));
  const double u_shock =
      (rho - rho_right) * std::sqrt(0.5 * (rho + rho_right) / (rho * rho_right));
  return u_rarefaction - u_shock;
}

}  // namespace

RiemannSolution solve_dam_break(double rho_left, double rho_right) {
  if (!(rho_right > 0.0) || !(rho_left > rho_right))
    throw InvalidInput("dam break oracle needs rho_left > rho_right > 0");

  double lo = rho_right, hi = rho_left;  // matching(lo) > 0 > matching(hi)
  for (int it = 0; it < 200 && hi - lo > 1e-15 * rho_left; ++it) {
    const double mid = 0.5 * (lo + hi);
    (matching(rho_left, rho_right, mid) > 0.0 ? lo : hi) = mid;
  }

  RiemannSolution s;
  s.rho_left = rho_left;
  s.rho_right = rho_right;
  s.rho_star = 0.5 * (lo + hi);
  s.u_star = 2.0 * (std::sqrt(rho_left) - std::sqrt(s.rho_star));
  s.m_star = s.rho_star * s.u_star;
  s.head_speed = -std::sqrt(rho_left);
  s.tail_speed = s.u_star - std::sqrt(s.rho_star);
  s.shock_speed = s.m_star / (s.rho_star - rho_right);
  return s;
}

std::pair<double, double> RiemannSolution::sample(double xi) const {
  if (xi <= head_speed) return {rho_left, 0.0};
  if (xi < tail_speed) {
    // u + 2 sqrt(rho) is constant and u - sqrt(rho) = xi inside the fan
    const double c = (2.0 * std::sqrt(rho_left) - xi) / 3.0;
    const double rho = c * c;
    return {rho, rho * (xi + c)};
  }
  if (xi < shock_speed) return {rho_star, m_star};
  return {rho_right, 0.0};
}

std::pair<double, double> dam_break_exact(double rho_left, double rho_right, double x, double t) {
  if (!(t > 0.0)) throw InvalidInput("dam break oracle needs t > 0");
  return solve_dam_break(rho_left, rho_right).sample(x / t);
}

double SteadyProfile::at(double xq) const {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (xq <= x.front()) return rho.front();
  if (xq >= x.back()) return rho.back();
  const double dx = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  const auto i = std::min(x.size() - 2, static_cast<std::size_t>((xq - x.front()) / dx));
  const double s = (xq - x[i]) / (x[i + 1] - x[i]);
  return (1.0 - s) * rho[i] + s * rho[i + 1];
}

namespace {

struct Shot {
  bool valid = false;  // false: hit the sonic point or lost positivity
  double mass = 0.0;
  std::vector<double> rho;
};

Shot shoot(const SteadyPipeParams& p, double rho_left, bool keep_profile) {
  const double flux_term = p.friction_sign * p.fric_b * std::abs(p.mbar) * p.mbar;
  auto slope = [&](double r) {
    // d/dx(mbar^2/r + c r^gamma) = (c gamma r^(gamma-1) - mbar^2/r^2) r'
    const double denom = p.eos_c * p.gamma * std::pow(r, p.gamma - 1.0) - p.mbar * p.mbar / (r * r);
    return flux_term / (r * denom);
  };
  auto subsonic_ok = [&](double r) {
    return r > 0.0 && p.eos_c * p.gamma * std::pow(r, p.gamma - 1.0) > p.mbar * p.mbar / (r * r);
  };

  Shot shot;
  const double dx = (p.x_right - p.x_left) / (p.grid_n - 1);
  if (keep_profile) shot.rho.reserve(p.grid_n);
  double r = rho_left;
  if (!subsonic_ok(r)) return shot;
  double mass = 0.0;
  if (keep_profile) shot.rho.push_back(r);
  for (int i = 1; i < p.grid_n; ++i) {
    const double k1 = slope(r);
    const double pred = r + dx * k1;
    if (!subsonic_ok(pred)) return shot;
    const double next = r + 0.5 * dx * (k1 + slope(pred));
    if (!subsonic_ok(next) || !std::isfinite(next)) return shot;
    mass += 0.5 * dx * (r + next);
    r = next;
    if (keep_profile) shot.rho.push_back(r);
  }
  shot.valid = true;
  shot.mass = mass;
  return shot;
}

// Invalid shots ran into the sonic point from above; treat them as too little mass.
double shot_mass(const Shot& s) {
  return s.valid ? s.mass : -std::numeric_limits<double>::infinity();
}

}  // namespace

SteadyProfile steady_pipe_shooting(const SteadyPipeParams& p) {
  if (!(p.fric_b >= 0.0)) throw InvalidInput("friction must be nonnegative");
  if (!(p.target_mass > 0.0)) throw InvalidInput("target mass must be positive");
  if (!(p.x_right > p.x_left)) throw InvalidInput("empty interval");
  if (p.grid_n < 2) throw InvalidInput("grid_n must be at least 2");
  if (!(p.gamma > 1.0) || !(p.eos_c > 0.0)) throw InvalidInput("invalid gas law");

  const double length = p.x_right - p.x_left;
  const double target = p.target_mass;
  double lo = target / length, hi = 2.0 * target / length;
  double m_lo = shot_mass(shoot(p, lo, false));
  double m_hi = shot_mass(shoot(p, hi, false));
  for (int k = 0; k < 60 && m_hi < target; ++k) {
    lo = hi;
    m_lo = m_hi;
    hi *= 2.0;
    m_hi = shot_mass(shoot(p, hi, false));
  }
  for (int k = 0; k < 60 && m_lo > target; ++k) {
    hi = lo;
    m_hi = m_lo;
    lo *= 0.5;
    m_lo = shot_mass(shoot(p, lo, false));
  }
  if (!(m_lo <= target && m_hi >= target))
    throw BracketFailure("cannot bracket rho(x_left) for target mass " + std::to_string(target));

  const double tol = 1e-8 * target;
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double m_mid = shot_mass(shoot(p, mid, false));
    if (m_mid < m_lo || m_mid > m_hi)
      throw NonMonotone("mass is not monotone in rho(x_left) near " + std::to_string(mid));
    if (std::abs(m_mid - target) <= tol) break;
    if (m_mid < target) {
      lo = mid;
      m_lo = m_mid;
    } else {
      hi = mid;
      m_hi = m_mid;
    }
  }

  Shot best = shoot(p, mid, true);
  if (!best.valid || std::abs(best.mass - target) > tol)
    throw BracketFailure("bisection did not reach the mass tolerance");

  SteadyProfile out;
  out.rho = std::move(best.rho);
  out.x.resize(p.grid_n);
  const double dx = length / (p.grid_n - 1);
  for (int i = 0; i < p.grid_n; ++i) out.x[i] = p.x_left + i * dx;
  out.rho_left = mid;
  out.mass = best.mass;
  return out;
}

JunctionSteady junction_steady(const NetworkGraph& graph, double gamma, double initial_mass) {
  if (!(gamma > 1.0)) throw InvalidInput("gamma must exceed 1");
  if (!(initial_mass > 0.0)) throw InvalidInput("mass must be positive");

  // P'_e(rho) = c_e gamma/(gamma-1) rho^(gamma-1) = H  =>  rho_e(H)
  auto rho_of = [&](const Edge& e, double enthalpy) {
    return std::pow(enthalpy * (gamma - 1.0) / (e.eos_c * gamma), 1.0 / (gamma - 1.0));
  };
  auto mass_of = [&](double enthalpy) {
    double m = 0.0;
    for (const Edge& e : graph.edges()) m += e.length * rho_of(e, enthalpy);
    return m;
  };

  JunctionSteady out;
  const double c0 = graph.edges().front().eos_c;
  const bool uniform_c = std::all_of(graph.edges().begin(), graph.edges().end(),
                                     [&](const Edge& e) { return e.eos_c == c0; });
  if (uniform_c) {
    const double rho = initial_mass / graph.total_length();
    out.rhobar.assign(graph.num_edges(), rho);
    out.enthalpy = c0 * gamma / (gamma - 1.0) * std::pow(rho, gamma - 1.0);
    return out;
  }

  double lo = 0.0, hi = 1.0;
  while (mass_of(hi) < initial_mass) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass_of(mid) < initial_mass ? lo : hi) = mid;
  }
  out.enthalpy = 0.5 * (lo + hi);
  for (const Edge& e : graph.edges()) out.rhobar.push_back(rho_of(e, out.enthalpy));
  return out;
}

}  // namespace gasnet
