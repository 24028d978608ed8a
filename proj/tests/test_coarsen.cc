#include <gtest/gtest.h>

#include <random>

#include "hebs/coarsen.h"
#include "support.h"

using namespace hebs;

TEST(Breakpoints, IdentityHasTwo) {
  const auto p = breakpoints(TransferTable::identity());
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0], (Vertex{0.0, 0.0}));
  EXPECT_EQ(p[1], (Vertex{1.0, 1.0}));
}

TEST(Breakpoints, TwoSlopes) {
  TransferTable t;
  for (int k = 0; k < 256; ++k) t.values[k] = k <= 128 ? 0.002 * k : 0.256 + 0.005 * (k - 128);
  const auto p = breakpoints(t);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_DOUBLE_EQ(p[1].x, 128.0 / 255.0);
}

TEST(Breakpoints, MatchIntegerSlopeOracle) {
  std::mt19937_64 rng(41);
  std::vector<Histogram> hists{histogram(test::ramp_image())};
  for (int i = 0; i < 200; ++i) hists.push_back(test::random_histogram(rng));
  for (int i = 0; i < 20; ++i) hists.push_back(histogram(test::textured_image(rng, 40, 40)));
  for (const auto& h : hists) {
    const auto p = breakpoints(equalize(h, 0.0, 1.0));
    const auto expected = test::integer_slope_changes(h);
    ASSERT_EQ(p.size(), expected.size());
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(std::lround(p[i].x * 255.0), expected[i]);
  }
}

TEST(Coarsen, CollinearNeedsTwo) {
  std::vector<Vertex> pts;
  for (int k : {0, 30, 99, 180, 255}) pts.push_back({k / 255.0, 0.2 + 0.5 * k / 255.0});
  const auto r = coarsen(pts, 2);
  EXPECT_EQ(r.curve.size(), 2u);
  EXPECT_NEAR(r.mse, 0.0, 1e-20);
}

TEST(Coarsen, FullBudgetKeepsAll) {
  std::mt19937_64 rng(3);
  const auto pts = test::random_breakpoints(rng, 9);
  const auto r = coarsen(pts, 9);
  EXPECT_EQ(r.curve.vertices(), pts);
  EXPECT_EQ(r.mse, 0.0);
}

TEST(Coarsen, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 30; ++i) {
    const auto pts = test::random_breakpoints(rng, 10);
    EXPECT_NEAR(coarsen(pts, 4).mse, test::exhaustive_coarsen_mse(pts, 4), 1e-12);
  }
}

TEST(Coarsen, ReportedMseMatchesCurve) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto pts = test::random_breakpoints(rng, 12);
    const auto r = coarsen(pts, 5);
    EXPECT_NEAR(r.mse, test::subset_mse(pts, r.curve.vertices()), 1e-12);
    EXPECT_EQ(r.curve.front(), pts.front());
    EXPECT_EQ(r.curve.back(), pts.back());
  }
}

TEST(Coarsen, NonIncreasingInBudget) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    const auto pts = test::random_breakpoints(rng, 15);
    double prev = INFINITY;
    for (std::size_t m = 2; m <= pts.size(); ++m) {
      const double mse = coarsen(pts, m).mse;
      EXPECT_LE(mse, prev + 1e-15);
      prev = mse;
    }
  }
}

TEST(Coarsen, Errors) {
  const std::vector<Vertex> pts{{0, 0}, {0.5, 0.2}, {1, 1}};
  EXPECT_THROW(coarsen(pts, 1), Error);
  EXPECT_THROW(coarsen(pts, 4), Error);
  EXPECT_THROW(PiecewiseLinearCurve({{0, 0}}), Error);
  EXPECT_THROW(PiecewiseLinearCurve({{0.5, 0}, {0.5, 1}}), Error);
}

TEST(Curve, Evaluation) {
  const PiecewiseLinearCurve c({{0, 0}, {0.5, 0.1}, {1, 1}});
  EXPECT_NEAR(eval_curve(c, 0.75), 0.55, 1e-15);
  EXPECT_EQ(eval_curve(c, 0.5), 0.1);
  EXPECT_EQ(eval_curve(PiecewiseLinearCurve::identity(), 0.25), 0.25);
  EXPECT_THROW(eval_curve(PiecewiseLinearCurve({{0.2, 0}, {1, 1}}), 0.1), Error);
  EXPECT_DOUBLE_EQ(c.max_y(), 1.0);
  EXPECT_TRUE(c.is_monotone());
}

TEST(Curve, TableRoundTrip) {
  std::mt19937_64 rng(9);
  const auto t = equalize(histogram(test::textured_image(rng, 30, 30)), 0.0, 0.7);
  const auto p = breakpoints(t);
  const auto back = PiecewiseLinearCurve(p).to_table();
  for (int k = 0; k < 256; ++k) EXPECT_NEAR(back[k], t[k], 1e-12);
}
