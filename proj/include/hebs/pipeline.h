#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hebs/baselines.h"
#include "hebs/characterize.h"
#include "hebs/display.h"
#include "hebs/power.h"

namespace hebs {

enum class RangeMode { kCurve, kPerImageBisection };

std::string_view to_string(RangeMode mode);

struct PipelineConfig {
  TransformConfig transform;
  QualityConfig quality;
  int sources = 10;                  ///< controllable ladder voltages k
  std::optional<int> dac_bits = 10;  ///< nullopt: unquantized ladder
  double beta_floor = 0.0;
  bool include_panel = false;
  PowerModels power;
  /// Worst-case curve for the range lookup; per-image bisection when empty.
  std::optional<DistortionCurve> curve;
  double slack = 0.005;  ///< tolerated excess of achieved over budgeted distortion
  int max_retries = 3;

  RangeMode range_mode() const { return curve ? RangeMode::kCurve : RangeMode::kPerImageBisection; }
  void validate() const;
};

/// Everything chosen for one image at one distortion budget.
struct ScalingPlan {
  double d_max = 0.0;
  double range = 1.0;  ///< R_min; g_min = 0 so g_max = R
  double beta = 1.0;
  TransferTable phi;
  CoarsenResult lambda;
  VoltageLadder ladder{{{0.0, 0.0}, {1.0, 1.0}}, std::nullopt};
  double achieved_distortion = 0.0;
  double predicted_distortion = 0.0;  ///< from the range lookup
  PowerReport power;
  CdfMode cdf_mode = CdfMode::kInclusiveRenormalized;
  RangeMode range_mode = RangeMode::kPerImageBisection;
  DistortionMap distortion_map = DistortionMap::kHalfComplement;
  bool identity = false;
  int retries = 0;
  std::vector<std::string> warnings;
  Image transformed;  ///< Lambda applied to the input; not serialized
};

ScalingPlan run_hebs(const Image& img, double d_max, const PipelineConfig& cfg = {});

/// The do-nothing plan: beta = 1, identity transfer, zero saving.
ScalingPlan identity_plan(const Image& img, double d_max, const PipelineConfig& cfg);

struct MethodOutcome {
  std::string method;
  double beta = 1.0;
  double distortion = 0.0;
  double saving = 0.0;
  bool fallback = false;
};

struct Comparison {
  double d_max = 0.0;
  ScalingPlan hebs;
  std::vector<BaselineResult> baselines;
  std::vector<MethodOutcome> methods;  ///< hebs first, then brightness, contrast, band
  /// HEBS saving fell more than `tolerance` below the band baseline.
  bool hebs_below_band = false;
};

inline constexpr double kBandComparisonTolerance = 0.01;

Comparison compare(const Image& img, double d_max, const PipelineConfig& cfg = {});

nlohmann::ordered_json to_json(const TransferTable& t);
TransferTable table_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const PiecewiseLinearCurve& c);
PiecewiseLinearCurve curve_from_vertices_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const VoltageLadder& l);
nlohmann::ordered_json to_json(const PowerReport& r);
nlohmann::ordered_json to_json(const ScalingPlan& p);
nlohmann::ordered_json to_json(const Comparison& c);

}  // namespace hebs
