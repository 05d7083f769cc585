#include "gasnet/eos.hpp"

#include <cmath>
#include <string>

namespace gasnet {

namespace {

void require_positive(double rho) {
  if (!(rho > 0.0)) throw PositivityLost("density must be positive, got " + std::to_string(rho));
}

}  // namespace

GasLaw::GasLaw(double gamma, std::vector<double> c) : gamma_(gamma), c_(std::move(c)) {
  if (!(gamma_ > 1.0) || !std::isfinite(gamma_)) throw InvalidInput("gamma must exceed 1");
  for (double ce : c_)
    if (!(ce > 0.0) || !std::isfinite(ce)) throw InvalidInput("eos_c must be positive");
}

GasLaw::GasLaw(double gamma, const NetworkGraph& graph) : GasLaw(gamma, [&] {
  std::vector<double> c;
  for (const Edge& e : graph.edges()) c.push_back(e.eos_c);
  return c;
}()) {}

double GasLaw::pressure(EdgeId e, double rho) const {
  require_positive(rho);
  return c(e) * std::pow(rho, gamma_);
}

double GasLaw::potential(EdgeId e, double rho) const {
  require_positive(rho);
  return c(e) / (gamma_ - 1.0) * std::pow(rho, gamma_);
}

double GasLaw::potential_prime(EdgeId e, double rho) const {
  require_positive(rho);
  return c(e) * gamma_ / (gamma_ - 1.0) * std::pow(rho, gamma_ - 1.0);
}

double GasLaw::potential_prime_over_rho(EdgeId e, double rho) const {
  require_positive(rho);
  return c(e) * gamma_ / (gamma_ - 1.0) * std::pow(rho, gamma_ - 2.0);
}

double pressure(const GasLaw& law, EdgeId e, double rho) { return law.pressure(e, rho); }
double potential(const GasLaw& law, EdgeId e, double rho) { return law.potential(e, rho); }
double potential_prime(const GasLaw& law, EdgeId e, double rho) {
  return law.potential_prime(e, rho);
}

}  // namespace gasnet
