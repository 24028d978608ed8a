#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "hebs/image.h"

namespace hebs {

enum class DistortionMap {
  kHalfComplement,     ///< D = (1 - Q) / 2
  kComplementClamped,  ///< D = clamp(1 - Q, 0, 1)
};

std::string_view to_string(DistortionMap map);
DistortionMap parse_distortion_map(std::string_view name);

struct QualityConfig {
  int window = 8;
  int stride = 1;
  DistortionMap distortion_map = DistortionMap::kHalfComplement;
};

/// Map a quality index Q in [-1, 1] to a distortion in [0, 1].
double distortion_from_quality(double q, DistortionMap map);

/// Universal image quality index of a single window, from raw statistics.
/// Degenerate windows: zero variance on both sides falls back to the
/// luminance term alone, zero means on both sides to the contrast-structure
/// term alone, and all-zero to 1.
double window_quality(double mean_a, double mean_b, double var_a, double var_b, double cov_ab);

/// Mean of the per-window index over all window positions of the luminance
/// planes of `a` and `b`.
double uqi(const Image& a, const Image& b, const QualityConfig& cfg = {});

double distortion(const Image& original, const Image& transformed, const QualityConfig& cfg = {});

/// Caches the window statistics of a fixed reference image so that many
/// candidate images can be scored against it cheaply. Scores are identical to
/// uqi()/distortion() on the same pair.
class QualityReference {
 public:
  QualityReference(const Image& reference, QualityConfig cfg = {});

  double uqi(std::span<const double> candidate_luma) const;
  double uqi(const Image& candidate) const;
  double distortion(const Image& candidate) const;
  double distortion(std::span<const double> candidate_luma) const;

  const QualityConfig& config() const { return cfg_; }
  int width() const { return width_; }
  int height() const { return height_; }

 private:
  QualityConfig cfg_;
  int width_;
  int height_;
  std::vector<double> luma_;
  std::vector<double> mean_;
  std::vector<double> var_;
  std::vector<unsigned char> flat_;
};

}  // namespace hebs
