#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "martinpot/closed_forms.hpp"
#include "martinpot/quadrature.hpp"
#include "martinpot/special.hpp"

using namespace martinpot;

TEST(BallPoisson, CentreValueAtDistanceTwo) {
  const BallSpec b({0.0, 0.0}, 1.0, 1.0);
  const double expected = 1.0 / (4.0 * std::sqrt(3.0) * std::numbers::pi * std::numbers::pi);
  EXPECT_NEAR(ball_poisson_kernel(b, {0.0, 0.0}, {2.0, 0.0}), expected, 1e-14);
  EXPECT_NEAR(expected, 0.01462, 1e-5);
}

TEST(BallPoisson, RejectsPointsOnWrongSide) {
  const BallSpec b({0.0, 0.0}, 1.0, 1.0);
  EXPECT_THROW(ball_poisson_kernel(b, {0.0, 0.0}, {0.5, 0.0}), std::invalid_argument);
  EXPECT_THROW(ball_poisson_kernel(b, {1.5, 0.0}, {2.0, 0.0}), std::invalid_argument);
}

TEST(BallPoisson, CentreKernelHasUnitMass) {
  // Radial integral of the centred kernel over |z| > r in d = 3.
  for (double alpha : {0.7, 1.0, 1.6}) {
    const BallSpec b({0.0, 0.0, 0.0}, 1.0, alpha);
    auto f = [&](double rho) { return ball_poisson_kernel(b, {0.0, 0.0, 0.0}, {rho, 0.0, 0.0}) * rho * rho; };
    // rho = 1 + s^2 removes the (rho^2 - 1)^{-alpha/2} edge singularity; the
    // smooth remainder is frozen once rho rounds too close to 1.
    auto smooth = [&](double rho) {
      const double q = std::max(rho, 1.0 + 1e-9);
      return f(q) * std::pow(q * q - 1.0, alpha / 2.0);
    };
    auto g = [&](double s) { return 2.0 * s * smooth(1.0 + s * s) * std::pow(s * s * (2.0 + s * s), -alpha / 2.0); };
    const double mass = special::sphere_area(3) * (quad::integrate(g, 0.0, 1.0).value + quad::integrate_to_infinity(f, 2.0).value);
    EXPECT_NEAR(mass, 1.0, 1e-7) << "alpha=" << alpha;
  }
}

TEST(BallGreen, SymmetryAndScaling) {
  const double alpha = 1.3;
  const BallSpec b({0.1, -0.2, 0.3}, 1.0, alpha);
  const Point x{0.2, 0.1, 0.0}, y{-0.3, 0.2, 0.5};
  EXPECT_NEAR(ball_green(b, x, y), ball_green(b, y, x), 1e-14);
  // G_{lambda B}(lambda x, lambda y) = lambda^{alpha - d} G_B(x, y)
  const double lam = 3.5;
  const BallSpec big({0.35, -0.7, 1.05}, lam, alpha);
  EXPECT_NEAR(ball_green(big, x * lam, y * lam) / ball_green(b, x, y), std::pow(lam, alpha - 3.0), 1e-10);
  EXPECT_THROW(ball_green(b, x, x), std::invalid_argument);
}

TEST(BallGreen, FromCentreMatchesGeneralForm) {
  const BallSpec b({0.0, 0.0}, 2.0, 1.5);
  for (double rho : {0.01, 0.5, 1.2, 1.99})
    EXPECT_NEAR(ball_green_from_center(2, 1.5, 2.0, rho) / ball_green(b, {0.0, 0.0}, {0.0, rho}), 1.0, 1e-9);
}

TEST(BallGreen, IntegratesToExitTime) {
  // int_B G(0, y) dy = E_0 tau_B, radially in d = 2.
  const double alpha = 1.0, r = 1.0;
  auto f = [&](double rho) { return ball_green_from_center(2, alpha, r, rho) * 2.0 * std::numbers::pi * rho; };
  const double mass = quad::integrate(f, 0.0, r, {1e-13, 1e-10, 4000}).value;
  EXPECT_NEAR(mass, ball_expected_exit(BallSpec({0.0, 0.0}, r, alpha), {0.0, 0.0}), 1e-7);
}

TEST(BallExit, CentreValueAndBoundary) {
  const BallSpec b({0.0, 0.0}, 1.0, 1.0);
  EXPECT_NEAR(ball_expected_exit(b, {0.0, 0.0}), 2.0 / std::numbers::pi, 1e-14);
  EXPECT_NEAR(ball_expected_exit(b, {1.0 - 1e-15, 0.0}), 0.0, 1e-7);
}

TEST(BallMartin, NormalisedAndLimitOfGreenRatio) {
  const BallSpec b({0.0, 0.0}, 1.0, 1.0);
  const Point z{0.0, 1.0}, x0{0.0, 0.0}, x{0.3, -0.2};
  EXPECT_DOUBLE_EQ(ball_martin_kernel(b, x0, z, x0), 1.0);
  const Point v{0.0, 1.0 - 1e-4};
  const double ratio = ball_green(b, x, v) / ball_green(b, x0, v);
  EXPECT_NEAR(ratio / ball_martin_kernel(b, x, z, x0), 1.0, 5e-3);
}

TEST(Riesz, ValueAndHomogeneity) {
  EXPECT_NEAR(riesz_green(1.0, 3, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}), 1.0 / (2.0 * std::numbers::pi * std::numbers::pi), 1e-14);
  const double g1 = riesz_green(0.8, 2, {0.0, 0.0}, {0.3, 0.4});
  const double g2 = riesz_green(0.8, 2, {0.0, 0.0}, {0.3 * 4.0, 0.4 * 4.0});
  EXPECT_NEAR(g2 / g1, std::pow(4.0, 0.8 - 2.0), 1e-12);
  EXPECT_THROW(riesz_green(1.5, 1, Point{0.0}, Point{1.0}), std::invalid_argument);
}

TEST(Riesz, LargeBallGreenApproachesRiesz) {
  const Point x{0.0, 0.0, 0.0}, y{1.0, 0.0, 0.0};
  const double g = riesz_green(1.0, 3, x, y);
  double prev = 0.0;
  for (double r : {10.0, 100.0, 1e4}) {
    const double gb = ball_green(BallSpec(x, r, 1.0), x, y);
    EXPECT_LE(gb, g * (1.0 + 1e-12));
    EXPECT_GE(gb, prev);
    prev = gb;
  }
  EXPECT_NEAR(prev / g, 1.0, 5e-3);
}
