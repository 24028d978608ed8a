#pragma once

#include <filesystem>

#include "hebs/image.h"

namespace hebs {

/// Two-piece linear CCFL backlight power as a function of the backlight
/// factor. Coefficients are the LP064V1 fit.
struct CcflModel {
  double a_lin = 1.9600;
  double c_lin = -0.2372;
  double a_sat = 6.9440;
  double c_sat = -4.3240;
  double c_s = 0.8234;  ///< saturation knee, belongs to the linear branch

  /// |linear(C_s) - saturated(C_s)|; the default coefficients leave a gap.
  double knee_discontinuity() const;
};

/// Quadratic TFT panel power in the mean transmissivity.
struct TftModel {
  double a = 0.02449;
  double b = -0.04984;
  double c = 0.993;
};

double ccfl_power(const CcflModel& m, double beta);
double tft_power(const TftModel& m, double mean_transmissivity);

/// Backlight factor that lets the brightest output level g_max reach full
/// transmissivity after the 1/beta spread, clamped below by `floor`.
double backlight_factor_for_range(double g_min, double g_max, double floor = 0.0);

struct PowerReport {
  double beta = 1.0;
  double backlight_power = 0.0;       ///< CCFL at beta
  double backlight_power_full = 0.0;  ///< CCFL at beta = 1
  double panel_power = 0.0;           ///< TFT at the dimmed frame's transmissivity
  double panel_power_full = 0.0;      ///< TFT at the original frame's transmissivity
  double total_power = 0.0;
  double total_power_full = 0.0;
  double saving_fraction = 0.0;
  bool include_panel = false;
  double knee_discontinuity = 0.0;
};

/// Power saving of showing a frame with mean displayed luminance
/// `displayed_mean` at backlight `beta`, against the original frame (mean
/// `original_mean`) at full backlight.
///
/// The panel term enters as a change: total(beta) = CCFL(beta) +
/// TFT(displayed_mean / beta) - TFT(original_mean), total(1) = CCFL(1).
PowerReport power_saving(const CcflModel& ccfl, const TftModel& tft, double beta, double displayed_mean,
                         double original_mean, bool include_panel = false);

/// Same, taking the frames directly: `displayed` holds luminance as shown
/// (for HEBS this is the Lambda-applied image).
PowerReport power_saving(const CcflModel& ccfl, const TftModel& tft, double beta, const Image& displayed,
                         const Image& original, bool include_panel = false);

double mean_luminance(const Image& img);

struct PowerModels {
  CcflModel ccfl;
  TftModel tft;
};

/// Reads coefficient overrides from JSON: {"ccfl": {"a_lin": ..}, "tft": {"a": ..}}.
/// Missing keys keep their defaults.
PowerModels load_power_models(const std::filesystem::path& path);

}  // namespace hebs
