#pragma once

#include <stdexcept>
#include <vector>

#include "gasnet/network.hpp"

namespace gasnet {

/// Raised when a density that must be positive is not.
class PositivityLost : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Power-law gas: p_e(rho) = c_e rho^gamma, P_e(rho) = c_e/(gamma-1) rho^gamma.
///
/// Everything downstream only relies on p, P and P' together with the identity
/// rho P'(rho) - P(rho) = p(rho), so another law satisfying it can replace this one.
class GasLaw {
public:
  GasLaw(double gamma, std::vector<double> c);
  /// Takes c_e from the graph's edges.
  GasLaw(double gamma, const NetworkGraph& graph);

  double gamma() const { return gamma_; }
  double c(EdgeId e) const { return c_.at(e); }
  int num_edges() const { return static_cast<int>(c_.size()); }

  double pressure(EdgeId e, double rho) const;
  double potential(EdgeId e, double rho) const;
  double potential_prime(EdgeId e, double rho) const;
  /// P'(rho)/rho, the coefficient of the linearized pressure term.
  double potential_prime_over_rho(EdgeId e, double rho) const;

private:
  double gamma_;
  std::vector<double> c_;
};

double pressure(const GasLaw& law, EdgeId e, double rho);
double potential(const GasLaw& law, EdgeId e, double rho);
double potential_prime(const GasLaw& law, EdgeId e, double rho);

}  // namespace gasnet
