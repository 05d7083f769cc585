#include <gtest/gtest.h>

#include <cmath>

#include "gasnet/eos.hpp"

using namespace gasnet;

TEST(GasLaw, ValuesForQuadraticLaw) {
  const GasLaw law(2.0, {0.5});
  EXPECT_DOUBLE_EQ(law.pressure(0, 3.0), 4.5);
  EXPECT_DOUBLE_EQ(law.potential(0, 3.0), 4.5);
  EXPECT_DOUBLE_EQ(law.potential_prime(0, 3.0), 3.0);
  EXPECT_DOUBLE_EQ(law.potential_prime_over_rho(0, 3.0), 1.0);
}

TEST(GasLaw, PotentialIdentityAndDerivative) {
  for (double gamma : {1.4, 2.0, 3.0}) {
    const GasLaw law(gamma, {0.7, 2.0});
    for (EdgeId e : {0, 1})
      for (double rho : {0.01, 0.5, 1.0, 7.0}) {
        // rho P' - P = p
        EXPECT_NEAR(rho * law.potential_prime(e, rho) - law.potential(e, rho),
                    law.pressure(e, rho), 1e-12 * law.pressure(e, rho));
        const double d = 1e-6 * rho;
        const double fd = (law.potential(e, rho + d) - law.potential(e, rho - d)) / (2 * d);
        EXPECT_NEAR(fd, law.potential_prime(e, rho), 1e-7 * std::abs(fd));
        // P'' = p'/rho > 0
        EXPECT_GT(law.potential_prime(e, rho + d), law.potential_prime(e, rho));
      }
  }
}

TEST(GasLaw, RejectsBadInput) {
  EXPECT_THROW(GasLaw(1.0, {1.0}), InvalidInput);
  EXPECT_THROW(GasLaw(2.0, {0.0}), InvalidInput);
  const GasLaw law(2.0, {1.0});
  EXPECT_THROW(law.pressure(0, 0.0), PositivityLost);
  EXPECT_THROW(law.potential(0, -1.0), PositivityLost);
  EXPECT_THROW(law.potential_prime(0, 0.0), PositivityLost);
}
