#include <gtest/gtest.h>

#include "thzris/power.hpp"

using namespace thzris;

TEST(Power, CmosPanel) { EXPECT_NEAR(panel_power(10540, cmos_rfsoi_profile()), 0.2108, 1e-12); }

TEST(Power, PinDiodePanel) { EXPECT_NEAR(panel_power(10540, pin_diode_profile()), 31.62, 1e-9); }

TEST(Power, ZeroPowerProfile) {
  const TechnologyProfile idle{"idle", 0.0, 2, ""};
  EXPECT_EQ(panel_power(10540, idle), 0.0);
}

TEST(Power, Validation) {
  EXPECT_THROW(panel_power(0, cmos_rfsoi_profile()), InvalidArgument);
  EXPECT_THROW(panel_power(10, TechnologyProfile{"bad", -1.0, 2, ""}), InvalidArgument);
  EXPECT_THROW(panel_power(10, TechnologyProfile{"", 1.0, 2, ""}), InvalidArgument);
  EXPECT_THROW(panel_power(10, TechnologyProfile{"x", 1.0, 0, ""}), InvalidArgument);
}

TEST(Power, BundledProfiles) {
  const auto profiles = bundled_technology_profiles();
  ASSERT_EQ(profiles.size(), 2u);
  EXPECT_TRUE(profiles.count("cmos_rfsoi"));
  EXPECT_TRUE(profiles.count("pin_diode"));
  EXPECT_EQ(profiles.at("pin_diode").switches_per_cell, 2);
}
