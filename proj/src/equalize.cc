#include "hebs/equalize.h"

#include <algorithm>
#include <cmath>

namespace hebs {

std::string_view to_string(CdfMode mode) {
  return mode == CdfMode::kExclusivePrefix ? "exclusive-prefix" : "inclusive-renormalized";
}

CdfMode parse_cdf_mode(std::string_view name) {
  if (name == "exclusive-prefix") return CdfMode::kExclusivePrefix;
  if (name == "inclusive-renormalized") return CdfMode::kInclusiveRenormalized;
  throw Error("unknown cdf mode: " + std::string(name));
}

TransferTable TransferTable::identity() {
  TransferTable t;
  for (int k = 0; k < kLevels; ++k) t.values[k] = from_code(k);
  return t;
}

TransferTable TransferTable::constant(double value) {
  TransferTable t;
  t.values.fill(value);
  t.g_min = value;
  t.g_max = value;
  return t;
}

bool TransferTable::is_monotone() const {
  return std::is_sorted(values.begin(), values.end());
}

TransferTable equalize(const Histogram& hist, double g_min, double g_max, CdfMode mode) {
  if (hist.total == 0) throw Error("equalize: empty histogram");
  if (!(g_min >= 0.0 && g_max <= 1.0 && g_min < g_max)) {
    throw Error("equalize: need 0 <= g_min < g_max <= 1");
  }
  TransferTable t;
  t.g_min = g_min;
  t.g_max = g_max;
  t.cdf_mode = mode;
  const double span = g_max - g_min;
  const auto cum = hist.cumulative();
  const double n = static_cast<double>(hist.total);

  if (mode == CdfMode::kExclusivePrefix) {
    std::uint64_t below = 0;
    for (int k = 0; k < kLevels; ++k) {
      t.values[k] = g_min + span * (static_cast<double>(below) / n);
      below = cum[k];
    }
    return t;
  }

  const int lo = hist.lowest_populated();
  const int hi = hist.highest_populated();
  if (lo == hi) {
    // A single populated level has no spread to rescale; it sits on g_min.
    t.values.fill(g_min);
    return t;
  }
  const std::uint64_t base = cum[lo];
  const double denom = static_cast<double>(hist.total - base);
  for (int k = 0; k < kLevels; ++k) {
    if (k < lo) {
      t.values[k] = g_min;
    } else if (k >= hi) {
      t.values[k] = g_max;
    } else {
      // Unpopulated levels share cum[] with the nearest lower populated level.
      t.values[k] = g_min + span * (static_cast<double>(cum[k] - base) / denom);
    }
  }
  return t;
}

Image apply_transfer(const Image& img, const TransferTable& table) {
  const auto samples = img.samples();
  std::vector<double> out(samples.size());
  std::transform(samples.begin(), samples.end(), out.begin(),
                 [&](double s) { return table.values[to_code(s)]; });
  return Image(img.width(), img.height(), img.channels(), std::move(out));
}

double equalization_residual(const Histogram& hist, const TransferTable& table) {
  const auto cum = hist.cumulative();
  const double n = static_cast<double>(hist.total);
  const double span = table.g_max - table.g_min;
  const double dx = 1.0 / kLevels;
  double total = 0.0;
  for (int k = 0; k < kLevels; ++k) {
    const double phi = table.values[k];
    double u;
    if (span <= 0.0) {
      u = phi >= table.g_max ? n : 0.0;
    } else {
      u = n * std::clamp((phi - table.g_min) / span, 0.0, 1.0);
    }
    total += std::abs(u - static_cast<double>(cum[k])) * dx;
  }
  return total;
}

}  // namespace hebs
