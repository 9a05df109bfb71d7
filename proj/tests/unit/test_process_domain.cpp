#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "martinpot/domain.hpp"
#include "martinpot/process_model.hpp"

using namespace martinpot;

TEST(ProcessModel, StablePowerLaws) {
  EXPECT_DOUBLE_EQ(make_stable(1.0, 2).psi0(2.0), 2.0);
  const ProcessSpec s = make_stable(1.5, 3);
  ASSERT_TRUE(s.h1() && s.h2());
  for (double v : {s.h1()->delta_low, s.h1()->delta_high, s.h2()->delta_low, s.h2()->delta_high}) EXPECT_DOUBLE_EQ(v, 0.75);
  const ProcessSpec h = make_stable(0.5, 2);
  EXPECT_NEAR(h.levy_density(1.0) / h.levy_density(2.0), std::pow(2.0, 2.5), 1e-12);
  for (double lam : {0.3, 2.0, 17.0})
    for (double t : {0.01, 1.0, 50.0}) EXPECT_NEAR(h.psi0(lam * t) / (std::pow(lam, 0.5) * h.psi0(t)), 1.0, 1e-13);
}

TEST(ProcessModel, RejectsParametersOutsideRange) {
  EXPECT_THROW(make_stable(2.0, 2), std::invalid_argument);
  EXPECT_THROW(make_stable(0.0, 2), std::invalid_argument);
  EXPECT_THROW(make_stable(1.0, 0), std::invalid_argument);
  EXPECT_THROW(make_geometric_stable(2.0, 2, 1), std::invalid_argument);
  EXPECT_NO_THROW(make_geometric_stable(2.0, 3, 1));
  EXPECT_THROW(make_geometric_stable(1.0, 3, 0), std::invalid_argument);
}

TEST(ProcessModel, GeometricStableComposition) {
  EXPECT_NEAR(geometric_laplace_exponent(1.0, 2.0, 1), std::log(2.0), 1e-15);
  EXPECT_NEAR(geometric_laplace_exponent(std::numbers::e - 1.0, 2.0, 2), std::log(2.0), 1e-15);
  // psi0(t) = phi_n(t^2)
  const ProcessSpec g = make_geometric_stable(1.0, 3, 2);
  EXPECT_NEAR(g.psi0(3.0), geometric_laplace_exponent(9.0, 1.0, 2), 1e-15);
}

TEST(ProcessModel, LevyDensityNonincreasingAndPositive) {
  for (const ProcessSpec& p : {make_stable(1.2, 2), make_geometric_stable(1.0, 3, 1)}) {
    double prev = INFINITY;
    for (double r = 1e-3; r < 1e3; r *= 1.3) {
      const double j = p.levy_density(r);
      EXPECT_GT(j, 0.0);
      EXPECT_LE(j, prev * (1.0 + 1e-12));
      prev = j;
    }
  }
}

TEST(ScalingCheck, StablePassesWithExactIndices) {
  const auto rep = check_scaling(make_stable(1.0, 2), ScalingRegime::h1, log_pair_grid(1.0, 1e6, 13));
  EXPECT_TRUE(rep.pass);
  EXPECT_NEAR(rep.delta_low, 0.5, 1e-12);
  EXPECT_NEAR(rep.delta_high, 0.5, 1e-12);
  EXPECT_NEAR(rep.a_low, 1.0, 1e-12);
  EXPECT_NEAR(rep.a_high, 1.0, 1e-12);
}

TEST(ScalingCheck, GeometricStableFailsAtInfinityHoldsAtZero) {
  const ProcessSpec g = make_geometric_stable(1.0, 3, 1);
  const auto h1 = check_scaling(g, ScalingRegime::h1, log_pair_grid(1.0, 1e6, 13));
  EXPECT_FALSE(h1.pass);
  EXPECT_LT(h1.delta_low, 0.05);
  const auto h2 = check_scaling(g, ScalingRegime::h2, log_pair_grid(1e-6, 1.0, 13));
  EXPECT_TRUE(h2.pass);
  EXPECT_LE(h2.delta_fit, 0.5);
}

TEST(ScalingCheck, EmptyFilteredGridThrows) {
  // Every pair lies below 1, so none is admissible for H1.
  EXPECT_THROW(check_scaling(make_stable(1.0, 2), ScalingRegime::h1, log_pair_grid(1e-3, 0.5, 5)),
               std::invalid_argument);
}

TEST(ProcessModel, LevyDensityAsymptotic) {
  const ProcessSpec s = make_stable(1.0, 2);
  EXPECT_DOUBLE_EQ(levy_density_asymptotic(s, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(levy_density_asymptotic(s, 2.0), 0.125);
  const double band = s.levy_density(1.0) / levy_density_asymptotic(s, 1.0);
  for (double r = 0.01; r <= 100.0; r *= 3.0) EXPECT_NEAR(s.levy_density(r) / levy_density_asymptotic(s, r), band, 1e-12 * band);
}

// ------------------------------------------------------------ domains

TEST(Domain, MembershipOfLeavesAndThorns) {
  EXPECT_TRUE(ball(Point(3), 1.0).contains(Point(3)));
  const Domain t = standard_thorn(Profile::power(1.0), 2);
  // The standard thorn uses the profile itself; f(t) = t / 2 through a table.
  const Domain half = standard_thorn(Profile::table({{1.0, 0.5}, {10.0, 5.0}}), 2);
  EXPECT_TRUE(half.contains(Point{4.0, 1.0}));
  EXPECT_FALSE(half.contains(Point{4.0, 2.5}));
  EXPECT_FALSE(half.contains(Point{1.0, 0.0}));
  EXPECT_TRUE(t.contains(Point{3.0, 2.9}));
}

TEST(Domain, DistanceBounds) {
  EXPECT_DOUBLE_EQ(dist_to_complement(ball(Point(2), 1.0), Point(2)), 1.0);
  EXPECT_DOUBLE_EQ(dist_to_complement(halfspace(Point{1.0, 0.0}, 0.0), Point{3.0, 0.0}), 3.0);
  const Domain lens = intersect({ball(Point{0.5, 0.0}, 1.0), ball(Point{-0.5, 0.0}, 1.0)});
  EXPECT_DOUBLE_EQ(dist_to_complement(lens, Point(2)), 0.5);
  EXPECT_THROW(dist_to_complement(ball(Point(2), 1.0), Point{2.0, 0.0}), std::invalid_argument);
}

TEST(Domain, SignedBoundNeverExceedsTrueDistance) {
  // The first exit along many rays bounds the true distance from above.
  const Domain D = subtract(intersect({ball(Point(2), 2.0), halfspace(Point{0.0, 1.0}, -0.5)}), ball(Point{0.8, 0.2}, 0.3));
  for (double x = -1.8; x <= 1.8; x += 0.3) {
    for (double y = -0.45; y <= 1.8; y += 0.25) {
      const Point p{x, y};
      if (!D.contains(p)) continue;
      const double b = D.signed_bound(p);
      double true_dist = INFINITY;
      for (int k = 0; k < 240; ++k) {
        const double th = 2.0 * std::numbers::pi * k / 240.0;
        const Point dir{std::cos(th), std::sin(th)};
        // March to the first exit along the ray, then bisect inside the step.
        double lo = 0.0, hi = 0.0;
        while (D.contains(p + dir * (hi + 0.002))) hi += 0.002;
        lo = hi;
        hi += 0.002;
        for (int it = 0; it < 40; ++it) {
          const double mid = 0.5 * (lo + hi);
          (D.contains(p + dir * mid) ? lo : hi) = mid;
        }
        true_dist = std::min(true_dist, hi);
      }
      EXPECT_GT(b, 0.0);
      EXPECT_LE(b, true_dist + 1e-9) << p.to_string();
      EXPECT_GE(b, 0.5 * true_dist - 1e-9) << p.to_string();
    }
  }
}

TEST(Domain, SlabAndTruncations) {
  const Domain s = slab(Point{0.0, 1.0}, 0.0, 2.0);
  EXPECT_TRUE(s.contains(Point{100.0, 1.0}));
  EXPECT_FALSE(s.contains(Point{0.0, 2.5}));
  EXPECT_FALSE(s.bounded());
  const Domain h = halfspace(Point{0.0, 1.0}, 0.0);
  const Domain inside = truncate_inside(h, Point(2), 1.0);
  EXPECT_TRUE(inside.bounded());
  EXPECT_TRUE(inside.contains(Point{0.0, 0.5}));
  EXPECT_FALSE(inside.contains(Point{0.0, 1.5}));
  const Domain outside = truncate_outside(h, Point(2), 1.0);
  EXPECT_FALSE(outside.contains(Point{0.0, 0.5}));
  EXPECT_TRUE(outside.contains(Point{0.0, 1.5}));
  const Domain ann = truncate_annulus(h, Point(2), 1.0, 2.0);
  EXPECT_TRUE(ann.contains(Point{0.0, 1.5}));
  EXPECT_FALSE(ann.contains(Point{0.0, 2.5}));
}

TEST(Domain, ProfilesRespectTheirDefinitions) {
  const Profile lp = Profile::log_power(0.5);
  EXPECT_NEAR(lp.value(std::exp(4.0)), std::exp(4.0) / 2.0, 1e-9);
  EXPECT_NEAR(lp.log_value_at_log(1e6), 1e6 - 0.5 * std::log(1e6), 1e-6);
  const Profile lz = Profile::log_power(1.0, ThornRegime::zero);
  EXPECT_NEAR(lz.value(std::exp(-3.0)), std::exp(-3.0) / 4.0, 1e-15);
}

TEST(Fatness, HalfspaceIsFatAtBoundaryAndInfinity) {
  const Domain h = halfspace(Point{0.0, 1.0}, 0.0);
  const std::vector<double> radii{0.01, 0.1, 1.0, 10.0, 100.0};
  EXPECT_TRUE(kappa_fat_at(h, Point(2), 0.25, radii).fat);
  EXPECT_TRUE(kappa_fat_at_infinity(h, 0.25, radii).fat);
}

TEST(Fatness, BallIsFatAtNorthPole) {
  const auto rep = kappa_fat_at(ball(Point(3), 1.0), Point{0.0, 0.0, 1.0}, 0.25, {0.05, 0.2, 0.5, 1.0});
  ASSERT_TRUE(rep.fat);
  for (std::size_t i = 0; i < rep.radii.size(); ++i) {
    // Witness balls lie in D intersect B(z0, r).
    const Point w = *rep.witnesses[i];
    EXPECT_LE(distance(w, Point{0.0, 0.0, 1.0}) + 0.25 * rep.radii[i], rep.radii[i] * (1.0 + 1e-12));
    EXPECT_GE(dist_to_complement(ball(Point(3), 1.0), w), 0.25 * rep.radii[i] * (1.0 - 1e-12));
  }
}

TEST(Fatness, LogThornIsNotFatAtInfinity) {
  // f(t) / t = 1 / log t, so with kappa = 1/4 witnesses exist up to r ~ 1e6
  // (a valid one is found there) and disappear by r = 1e9.
  const Domain t = standard_thorn(Profile::log_power(1.0), 2);
  const auto rep = kappa_fat_at_infinity(t, 0.25, {10.0, 1e3, 1e6, 1e9});
  EXPECT_FALSE(rep.fat);
  ASSERT_TRUE(rep.witnesses[2].has_value());
  EXPECT_GE(t.signed_bound(*rep.witnesses[2]), 0.25 * 1e6);
  EXPECT_FALSE(rep.witnesses[3].has_value());
}
