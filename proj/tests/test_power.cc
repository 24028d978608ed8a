#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "hebs/power.h"

using namespace hebs;

TEST(Power, CcflPoints) {
  const CcflModel m;
  EXPECT_NEAR(ccfl_power(m, 0.5), 1.96 * 0.5 - 0.2372, 1e-12);
  EXPECT_NEAR(ccfl_power(m, 0.5), 0.7428, 1e-9);
  EXPECT_NEAR(ccfl_power(m, 1.0), 2.6200, 1e-9);
  EXPECT_NEAR(ccfl_power(m, 0.8234), 1.96 * 0.8234 - 0.2372, 1e-12);
  EXPECT_NEAR(ccfl_power(m, 0.8234), 1.3767, 1e-4);
  EXPECT_NEAR(m.knee_discontinuity(), (6.944 * 0.8234 - 4.324) - (1.96 * 0.8234 - 0.2372), 1e-12);
  EXPECT_THROW(ccfl_power(m, 0.0), Error);
  EXPECT_THROW(ccfl_power(m, 1.01), Error);
}

TEST(Power, CcflIncreasing) {
  // The linear branch crosses zero at 0.2372 / 1.96; below that the clamp holds it at 0.
  const CcflModel m;
  const double zero = -m.c_lin / m.a_lin;
  double prev = -1.0;
  for (int i = 1; i <= 1000; ++i) {
    const double beta = i / 1000.0;
    const double p = ccfl_power(m, beta);
    EXPECT_GE(p, 0.0);
    if (beta > zero) {
      EXPECT_GT(p, prev) << beta;
    } else {
      EXPECT_EQ(p, 0.0) << beta;
    }
    prev = p;
  }
}

TEST(Power, SavingNonIncreasingInBeta) {
  const CcflModel c;
  const TftModel t;
  double prev = 2.0;
  for (int i = 1; i <= 256; ++i) {
    const double s = power_saving(c, t, i / 256.0, 0.3, 0.5).saving_fraction;
    EXPECT_LE(s, prev);
    EXPECT_LE(s, 1.0);
    prev = s;
  }
}

TEST(Power, PanelTermIsSmall) {
  const CcflModel c;
  const TftModel t;
  for (int b = 1; b <= 20; ++b) {
    const double beta = b / 20.0;
    for (int i = 0; i <= 10; ++i) {
      for (int j = 0; j <= 10; ++j) {
        const double shown = beta * i / 10.0, original = j / 10.0;
        const double off = power_saving(c, t, beta, shown, original, false).saving_fraction;
        const double on = power_saving(c, t, beta, shown, original, true).saving_fraction;
        EXPECT_LT(std::abs(on - off), 0.02);
      }
    }
  }
}

TEST(Power, TftPoints) {
  const TftModel m;
  EXPECT_NEAR(tft_power(m, 0.0), 0.993, 1e-9);
  EXPECT_NEAR(tft_power(m, 1.0), 0.96765, 1e-9);
  EXPECT_NEAR(tft_power(m, 0.5), 0.02449 * 0.25 - 0.04984 * 0.5 + 0.993, 1e-12);
  EXPECT_THROW(tft_power(m, 1.5), Error);
}

TEST(Power, BacklightFactor) {
  EXPECT_EQ(backlight_factor_for_range(0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(backlight_factor_for_range(0.0, 0.4), 0.4);
  EXPECT_DOUBLE_EQ(backlight_factor_for_range(0.0, 0.05, 0.1), 0.1);
  EXPECT_THROW(backlight_factor_for_range(0.5, 0.4), Error);
}

TEST(Power, Saving) {
  const CcflModel c;
  const TftModel t;
  EXPECT_EQ(power_saving(c, t, 1.0, 0.4, 0.4).saving_fraction, 0.0);
  const auto r = power_saving(c, t, 0.42, 0.3, 0.5);
  EXPECT_NEAR(r.saving_fraction, 1.0 - (1.96 * 0.42 - 0.2372) / 2.62, 1e-12);
  EXPECT_NEAR(r.saving_fraction, 0.7763, 1e-4);
  for (int i = 1; i < 100; ++i) EXPECT_GT(power_saving(c, t, i / 100.0, 0.2, 0.5).saving_fraction, 0.0);
}

TEST(Power, PanelTermEntersAsChange) {
  const CcflModel c;
  const TftModel t;
  const auto r = power_saving(c, t, 0.5, 0.25, 0.6, true);
  const double expected_total = ccfl_power(c, 0.5) + tft_power(t, 0.5) - tft_power(t, 0.6);
  EXPECT_NEAR(r.total_power, expected_total, 1e-12);
  EXPECT_NEAR(r.saving_fraction, 1.0 - expected_total / ccfl_power(c, 1.0), 1e-12);
  EXPECT_EQ(power_saving(c, t, 1.0, 0.6, 0.6, true).saving_fraction, 0.0);
}

TEST(Power, ImageOverloadUsesMeans) {
  const auto shown = Image::gray(2, 1, {0.1, 0.3});
  const auto orig = Image::gray(2, 1, {0.2, 0.6});
  EXPECT_DOUBLE_EQ(mean_luminance(orig), 0.4);
  const CcflModel c;
  const TftModel t;
  EXPECT_EQ(power_saving(c, t, 0.5, shown, orig, true).saving_fraction,
            power_saving(c, t, 0.5, mean_luminance(shown), mean_luminance(orig), true).saving_fraction);
}

TEST(Power, LoadOverrides) {
  const auto p = std::filesystem::temp_directory_path() / "hebs_power.json";
  std::ofstream(p) << R"({"ccfl": {"a_lin": 2.0}, "tft": {"c": 1.0}})";
  const auto m = load_power_models(p);
  EXPECT_EQ(m.ccfl.a_lin, 2.0);
  EXPECT_EQ(m.ccfl.c_s, 0.8234);
  EXPECT_EQ(m.tft.c, 1.0);
  std::ofstream(p) << "{ nope";
  EXPECT_THROW(load_power_models(p), Error);
}
