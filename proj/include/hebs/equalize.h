#pragma once

#include <array>
#include <string_view>

#include "hebs/image.h"

namespace hebs {

enum class CdfMode {
  /// Phi(x_i) = g_min + (g_max - g_min) * sum_{k<i} h_k / N; the brightest
  /// populated level stays short of g_max.
  kExclusivePrefix,
  /// Inclusive CDF rescaled so the lowest populated level lands on g_min and
  /// the highest on g_max.
  kInclusiveRenormalized,
};

std::string_view to_string(CdfMode mode);
CdfMode parse_cdf_mode(std::string_view name);

/// Exact discrete transfer function: values[k] is the output for 8-bit code k.
struct TransferTable {
  std::array<double, kLevels> values{};
  double g_min = 0.0;
  double g_max = 1.0;
  CdfMode cdf_mode = CdfMode::kInclusiveRenormalized;

  static TransferTable identity();
  static TransferTable constant(double value);

  double operator[](int k) const { return values[k]; }
  bool is_monotone() const;
};

TransferTable equalize(const Histogram& hist, double g_min, double g_max,
                       CdfMode mode = CdfMode::kInclusiveRenormalized);

/// Applies the table to every channel by each sample's 8-bit code.
Image apply_transfer(const Image& img, const TransferTable& table);

/// Discrete form of the integral of |U(Phi(x)) - H(x)| dx, with U the
/// cumulative uniform histogram on [g_min, g_max] and dx = 1/256.
double equalization_residual(const Histogram& hist, const TransferTable& table);

}  // namespace hebs
