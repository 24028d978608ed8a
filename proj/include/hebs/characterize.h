#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hebs/coarsen.h"
#include "hebs/equalize.h"
#include "hebs/quality.h"

namespace hebs {

/// How an equalizing transfer function is built and coarsened for a range.
struct TransformConfig {
  std::size_t vertices = 11;  ///< Lambda vertex budget m (m - 1 segments)
  CdfMode cdf_mode = CdfMode::kInclusiveRenormalized;
};

/// Phi equalizing onto [0, range] and its coarsened Lambda.
struct RangeTransform {
  TransferTable phi;
  CoarsenResult lambda;
  TransferTable lambda_table;
};

RangeTransform transform_for_range(const Histogram& hist, double range, const TransformConfig& cfg);

/// Distortion between `img` and its Lambda-applied version at one range.
double distortion_at_range(const Image& img, const Histogram& hist, const QualityReference& ref, double range,
                           const TransformConfig& cfg);

struct RangeSample {
  double range = 0.0;
  double distortion = 0.0;
};

std::vector<double> default_ranges();  ///< 0.1, 0.2, ..., 1.0

std::vector<RangeSample> sweep(const Image& img, const std::vector<double>& ranges, const TransformConfig& cfg = {},
                               const QualityConfig& quality = {});

struct ImageSweep {
  std::string name;
  std::vector<double> distortion;  ///< one per range of the owning curve
};

/// Distortion characteristic curve over a corpus: the least-squares quadratic
/// D ~ c2 R^2 + c1 R + c0 through every sample (average) and the per-range
/// maximum made non-increasing in R (worst case).
struct DistortionCurve {
  std::string corpus_id;
  std::vector<double> ranges;
  std::vector<ImageSweep> samples;
  std::array<double, 3> avg_coeffs{};  ///< c0, c1, c2
  std::vector<double> worst_envelope;

  double average(double range) const;
  /// Piecewise-linear interpolation of the envelope; flat outside the grid.
  double worst(double range) const;
  /// max over sampled ranges of average(R) - worst(R).
  double max_average_excess() const;
};

DistortionCurve fit(const std::vector<double>& ranges, std::vector<ImageSweep> sweeps, std::string corpus_id = "");

/// Least non-increasing majorant: out[i] = max(values[i..]).
std::vector<double> monotone_upper_envelope(const std::vector<double>& values);

/// Least-squares polynomial coefficients (ascending powers).
std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree);

struct RangeLookup {
  double range = 1.0;
  double distortion = 0.0;   ///< evaluated (bisection) or predicted (curve) at `range`
  bool unreachable = false;  ///< the budget is not met even at range 1
  int evaluations = 0;
};

/// Smallest range whose worst-case envelope is within d_max.
RangeLookup min_range_from_curve(const DistortionCurve& curve, double d_max);

inline constexpr int kRangeSteps = 256;
inline constexpr int kCoarseStride = 8;

/// Smallest range k / 256 whose evaluated distortion is within d_max. A scan
/// over every 8th step finds the first admissible range, then binary search
/// refines inside that bracket. The returned range R meets the budget and
/// R - 1/256 was evaluated and does not, unless R is 1/256. `unreachable`
/// when no scanned range meets the budget.
RangeLookup min_range_by_bisection(const Image& img, double d_max, const TransformConfig& cfg = {},
                                   const QualityConfig& quality = {});
RangeLookup min_range_by_bisection(const Image& img, const Histogram& hist, const QualityReference& ref,
                                   double d_max, const TransformConfig& cfg);

void write_curve_csv(const DistortionCurve& curve, const std::filesystem::path& path,
                     const std::string& comment = "");
nlohmann::ordered_json curve_to_json(const DistortionCurve& curve);
DistortionCurve curve_from_json(const nlohmann::json& j);
/// `metadata` is stored under "run" when not null.
void write_curve_json(const DistortionCurve& curve, const std::filesystem::path& path,
                      const nlohmann::ordered_json& metadata = nullptr);
/// Loads curve.json, or curve.csv (average coefficients are refit from D_avg).
DistortionCurve load_curve(const std::filesystem::path& path);

}  // namespace hebs
