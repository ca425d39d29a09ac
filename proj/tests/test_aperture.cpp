#include <gtest/gtest.h>

#include <random>

#include "thzris/aperture.hpp"

using namespace thzris;

TEST(Rcs, PlateFormula) {
  const auto f = Frequency::ghz(140);
  const ApertureSpec a = ApertureSpec::half_wavelength(0.11, f, 0.25);
  const double lambda = f.wavelength();
  const double expected = 0.25 * 4.0 * pi / (lambda * lambda) * std::pow(0.11, 4) * std::cos(deg_to_rad(45.0));
  EXPECT_NEAR(rcs(a, Direction::broadside(), Direction::degrees(45.0)) / expected, 1.0, 1e-12);
  EXPECT_NEAR(linear_to_db(rcs(a, Direction::broadside(), Direction::degrees(45.0))), 18.508202809956643, 1e-9);
}

TEST(Rcs, VanishesAtGrazing) {
  const ApertureSpec a = ApertureSpec::half_wavelength(0.05, Frequency::ghz(140));
  EXPECT_EQ(rcs(a, Direction(pi / 2.0, 0.0), Direction::broadside()), 0.0);
}

TEST(Solve, ReferenceLink) {
  const auto f = Frequency::ghz(140);
  const double sigma = db_to_linear(18.321242749109842);
  const double d = solve_aperture_size(sigma, 0.25, Direction::broadside(), Direction::degrees(45.0), f);
  EXPECT_NEAR(d, 0.10882249619700025, 1e-12);
  EXPECT_EQ(element_count(ApertureSpec::half_wavelength(d, f, 0.25)), 10330);
  EXPECT_EQ(element_count(ApertureSpec::half_wavelength(d, f, 0.25), CountMode::FloorPerAxis), 101 * 101);
}

TEST(Solve, QuarticScalingWithEfficiency) {
  const auto f = Frequency::ghz(140);
  const auto in = Direction::broadside();
  const auto out = Direction::degrees(45.0);
  const double quarter = solve_aperture_size(50.0, 0.25, in, out, f);
  const double full = solve_aperture_size(50.0, 1.0, in, out, f);
  EXPECT_NEAR(quarter / full, std::sqrt(2.0), 1e-12);
}

TEST(Solve, RoundTripWithRcs) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> side(0.01, 0.5), eta(0.05, 1.0), angle(0.0, 80.0), ghz(50.0, 500.0);
  for (int i = 0; i < 500; ++i) {
    const auto f = Frequency::ghz(ghz(rng));
    const auto in = Direction::degrees(angle(rng), 0.0);
    const auto out = Direction::degrees(angle(rng), 180.0);
    const ApertureSpec a = ApertureSpec::half_wavelength(side(rng), f, eta(rng));
    const double back = solve_aperture_size(rcs(a, in, out), a.efficiency(), in, out, f);
    EXPECT_NEAR(back / a.side(), 1.0, 1e-12);
  }
}

TEST(Solve, Errors) {
  const auto f = Frequency::ghz(140);
  EXPECT_THROW(solve_aperture_size(10.0, 0.5, Direction(pi / 2.0, 0.0), Direction::broadside(), f), InfeasibleError);
  EXPECT_THROW(solve_aperture_size(-1.0, 0.5, Direction::broadside(), Direction::broadside(), f), InvalidArgument);
  EXPECT_THROW(solve_aperture_size(1.0, 1.5, Direction::broadside(), Direction::broadside(), f), InvalidArgument);
}

TEST(Solve, NearGrazingNeedsHugeAperture) {
  const auto f = Frequency::ghz(140);
  const double normal = solve_aperture_size(50.0, 0.25, Direction::broadside(), Direction::degrees(45.0), f);
  const double grazing = solve_aperture_size(50.0, 0.25, Direction::broadside(), Direction::degrees(89.9), f);
  EXPECT_GT(grazing, 2.5 * normal);
}

TEST(ApertureSpecTest, Construction) {
  const auto f = Frequency::ghz(140);
  const auto a = ApertureSpec::from_cells(100, f);
  EXPECT_EQ(a.cells_per_side(), 100);
  EXPECT_EQ(element_count(a), 10000);
  EXPECT_NEAR(a.side(), 100 * f.wavelength() / 2.0, 1e-15);
  EXPECT_THROW(ApertureSpec(0.0001, 0.001, f, 1.0), InvalidArgument);
  EXPECT_THROW(ApertureSpec(0.1, 0.001, f, 0.0), InvalidArgument);
}

TEST(PecBound, RandomEfficienciesStayBelow) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> eta(1e-6, 1.0);
  const ApertureSpec a = ApertureSpec::half_wavelength(0.08, Frequency::ghz(140));
  for (int i = 0; i < 1000; ++i)
    EXPECT_TRUE(pec_bound_check(a.with_efficiency(eta(rng)), Direction::broadside(), Direction::degrees(30.0)));
}

TEST(Ledger, HalfTimesThreeDb) {
  const EfficiencyLedger ledger;
  EXPECT_NEAR(ledger.resulting_eff(), 0.25059361, 1e-8);
  EXPECT_THROW((EfficiencyLedger{0.0, 3.0}.validate()), InvalidArgument);
  EXPECT_THROW((EfficiencyLedger{0.5, -1.0}.validate()), InvalidArgument);
}
