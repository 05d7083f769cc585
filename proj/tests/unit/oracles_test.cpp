#include <gtest/gtest.h>

#include <cmath>

#include "gasnet/oracles.hpp"
#include "test_graphs.hpp"

using namespace gasnet;

// Reference values computed independently with 50-digit arithmetic.
TEST(DamBreak, IntermediateStateAndSpeeds) {
  const RiemannSolution s = solve_dam_break(3.0, 1.0);
  EXPECT_NEAR(s.rho_star, 1.84857660309675719, 1e-13);
  EXPECT_NEAR(s.u_star, 0.744854216980126714, 1e-13);
  EXPECT_NEAR(s.m_star, 1.37692007822741756, 1e-13);
  EXPECT_NEAR(s.shock_speed, 1.62262319418488268, 1e-12);
  EXPECT_NEAR(s.tail_speed, -0.614769482098687222, 1e-13);
  EXPECT_NEAR(s.head_speed, -std::sqrt(3.0), 1e-15);
}

TEST(DamBreak, JumpConditionsAndInvariant) {
  for (auto [rl, rr] : {std::pair{3.0, 1.0}, {10.0, 0.1}, {1.01, 1.0}}) {
    const RiemannSolution s = solve_dam_break(rl, rr);
    // mass and momentum across the shock with p = rho^2 / 2
    EXPECT_NEAR(s.shock_speed * (s.rho_star - rr), s.m_star, 1e-12 * rl);
    const double flux_star = s.m_star * s.m_star / s.rho_star + 0.5 * s.rho_star * s.rho_star;
    EXPECT_NEAR(s.shock_speed * s.m_star, flux_star - 0.5 * rr * rr, 1e-11 * rl * rl);
    // left-going Riemann invariant through the fan
    EXPECT_NEAR(s.u_star + 2 * std::sqrt(s.rho_star), 2 * std::sqrt(rl), 1e-12);
    for (double xi = s.head_speed; xi < s.tail_speed; xi += 0.01) {
      const auto [rho, m] = s.sample(xi);
      EXPECT_NEAR(m / rho + 2 * std::sqrt(rho), 2 * std::sqrt(rl), 1e-12);
    }
    const auto at_tail = s.sample(s.tail_speed - 1e-12);
    EXPECT_NEAR(at_tail.first, s.rho_star, 1e-9);
  }
}

TEST(DamBreak, ExactSolutionConservesMass) {
  const double t = 2.0;
  double mass = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double x = -5.0 + 10.0 * (k + 0.5) / n;
    mass += dam_break_exact(3.0, 1.0, x, t).first * 10.0 / n;
  }
  EXPECT_NEAR(mass, 20.0, 1e-4);
  EXPECT_THROW(dam_break_exact(3.0, 1.0, 0.0, 0.0), InvalidInput);
  EXPECT_THROW(solve_dam_break(1.0, 3.0), InvalidInput);
}

TEST(SteadyPipe, ProfileValues) {
  const SteadyProfile p = steady_pipe_shooting({});
  EXPECT_NEAR(p.rho.front(), 14.499563230183208, 1e-6);
  EXPECT_NEAR(p.at(0.0), 11.567147601044585, 1e-6);
  EXPECT_NEAR(p.rho.back(), 3.5333929316144213, 1e-6);
  EXPECT_NEAR(p.mass, 110.0, 110.0 * 1e-8);
  // decreasing in the flow direction
  for (std::size_t i = 1; i < p.rho.size(); ++i) ASSERT_LT(p.rho[i], p.rho[i - 1]);
}

TEST(SteadyPipe, HeunIsSecondOrder) {
  const double reference = 14.499563230183208;
  std::vector<double> err;
  for (int n : {201, 401, 801}) {
    SteadyPipeParams params;
    params.grid_n = n;
    err.push_back(std::abs(steady_pipe_shooting(params).rho_left - reference));
  }
  EXPECT_NEAR(err[0] / err[1], 4.0, 0.4);
  EXPECT_NEAR(err[1] / err[2], 4.0, 0.4);
}

TEST(SteadyPipe, NoFrictionGivesConstantDensity) {
  SteadyPipeParams params;
  params.fric_b = 0.0;
  params.grid_n = 1001;
  const SteadyProfile p = steady_pipe_shooting(params);
  EXPECT_NEAR(p.rho_left, 11.0, 1e-6);
  EXPECT_NEAR(p.rho.back(), 11.0, 1e-6);
}

TEST(Junction, EqualPressureConstantsGiveMeanDensity) {
  const JunctionSteady js = junction_steady(fixtures::junction_graph(), 2.0, 9.0);
  for (double r : js.rhobar) EXPECT_DOUBLE_EQ(r, 3.0);
  EXPECT_EQ(js.mbar, 0.0);
}

TEST(Junction, DifferentPressureConstantsShareEnthalpy) {
  const NetworkGraph g(4, {Edge{0, 0, 1, 1.0, 0, 0, 0.5, 0}, Edge{1, 1, 2, 2.0, 0, 0, 1.0, 0},
                           Edge{2, 1, 3, 0.5, 0, 0, 2.0, 0}});
  const double gamma = 1.4;
  const JunctionSteady js = junction_steady(g, gamma, 6.0);
  double mass = 0.0;
  for (const Edge& e : g.edges()) {
    const double h = e.eos_c * gamma / (gamma - 1) * std::pow(js.rhobar[e.id], gamma - 1);
    EXPECT_NEAR(h, js.enthalpy, 1e-12 * js.enthalpy);
    mass += e.length * js.rhobar[e.id];
  }
  EXPECT_NEAR(mass, 6.0, 1e-12);
}
