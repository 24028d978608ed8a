#pragma once

#include <string_view>

#include "hebs/equalize.h"
#include "hebs/quality.h"

namespace hebs {

/// Prior-art pixel transforms used with backlight dimming. Their tables are
/// already post-compensation transmissivities; the display shows beta * table.
enum class BaselineKind {
  kBrightness,  ///< min(1, x + 1 - beta)
  kContrast,    ///< min(1, x / beta)
  kBand,        ///< single-band grayscale spreading over [g_l, g_u], beta = g_u - g_l
};

std::string_view to_string(BaselineKind kind);

struct BaselineSpec {
  BaselineKind kind = BaselineKind::kContrast;
  double beta = 1.0;
  double g_l = 0.0;  ///< band only
  double g_u = 1.0;  ///< band only

  static BaselineSpec band(double g_l, double g_u) { return {BaselineKind::kBand, g_u - g_l, g_l, g_u}; }
};

TransferTable baseline_transfer(const BaselineSpec& spec);

/// Luminance shown by the display for a baseline: beta * table(x).
Image simulate_baseline(const Image& img, const BaselineSpec& spec);

struct BaselineResult {
  BaselineSpec spec;
  TransferTable table;
  double distortion = 0.0;
  bool fallback = false;  ///< no dimmed setting met the budget
};

/// Number of uniform g_l candidates tried per beta for the band transform.
inline constexpr int kBandGrid = 32;

/// Deepest dimming (smallest beta on the 1/256 grid) whose simulated display
/// meets `d_max`, found by bisection. Falls back to beta = 1.
BaselineResult best_baseline_beta(const Image& img, BaselineKind kind, double d_max, const QualityConfig& cfg = {});
BaselineResult best_baseline_beta(const Image& img, const QualityReference& reference, BaselineKind kind,
                                  double d_max);

}  // namespace hebs
