#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hebs/coarsen.h"
#include "hebs/equalize.h"
#include "hebs/image.h"

namespace hebs::test {

inline Image random_image(std::mt19937_64& rng, int w, int h, int lo = 0, int hi = 255) {
  std::uniform_int_distribution<int> code(lo, hi);
  std::vector<std::uint8_t> codes(static_cast<std::size_t>(w) * h);
  for (auto& c : codes) c = static_cast<std::uint8_t>(code(rng));
  return Image::from_codes(w, h, 1, codes);
}

/// Smooth gradient plus noise, closer to a natural image than white noise.
inline Image textured_image(std::mt19937_64& rng, int w, int h) {
  std::normal_distribution<double> noise(0.0, 12.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = u(rng) * 150.0, b = u(rng) * 100.0, c = 20.0 + u(rng) * 60.0;
  std::vector<std::uint8_t> codes(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = c + a * x / w + b * std::sin(0.3 * y) + noise(rng);
      codes[static_cast<std::size_t>(y) * w + x] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return Image::from_codes(w, h, 1, codes);
}

inline Image ramp_image() {
  std::vector<std::uint8_t> codes(256);
  for (int k = 0; k < 256; ++k) codes[k] = static_cast<std::uint8_t>(k);
  return Image::from_codes(16, 16, 1, codes);
}

inline Histogram random_histogram(std::mt19937_64& rng) {
  Histogram h;
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_int_distribution<std::uint64_t> count(1, 5000);
  for (auto& c : h.counts) {
    c = pick(rng) == 0 ? 0 : count(rng);
    h.total += c;
  }
  if (h.total == 0) {
    h.counts[17] = 1;
    h.total = 1;
  }
  return h;
}

/// Straightforward per-window UQI in long double, recomputing every window
/// from scratch. Flat windows are detected by comparing samples.
inline double naive_uqi(const Image& a, const Image& b, int window, int stride = 1) {
  const auto la = a.luminance(), lb = b.luminance();
  const int w = a.width(), h = a.height();
  long double sum = 0.0L;
  long double count = 0.0L;
  for (int y0 = 0; y0 + window <= h; y0 += stride) {
    for (int x0 = 0; x0 + window <= w; x0 += stride) {
      long double ma = 0, mb = 0;
      bool flat_a = true, flat_b = true;
      const double a0 = la[static_cast<std::size_t>(y0) * w + x0], b0 = lb[static_cast<std::size_t>(y0) * w + x0];
      for (int y = y0; y < y0 + window; ++y) {
        for (int x = x0; x < x0 + window; ++x) {
          const std::size_t i = static_cast<std::size_t>(y) * w + x;
          ma += la[i];
          mb += lb[i];
          flat_a = flat_a && la[i] == a0;
          flat_b = flat_b && lb[i] == b0;
        }
      }
      const long double n = static_cast<long double>(window) * window;
      ma /= n;
      mb /= n;
      long double va = 0, vb = 0, cab = 0;
      for (int y = y0; y < y0 + window; ++y) {
        for (int x = x0; x < x0 + window; ++x) {
          const std::size_t i = static_cast<std::size_t>(y) * w + x;
          va += (la[i] - ma) * (la[i] - ma);
          vb += (lb[i] - mb) * (lb[i] - mb);
          cab += (la[i] - ma) * (lb[i] - mb);
        }
      }
      va = flat_a ? 0 : va / n;
      vb = flat_b ? 0 : vb / n;
      cab = (flat_a || flat_b) ? 0 : cab / n;
      if (flat_a) ma = a0;
      if (flat_b) mb = b0;
      long double q;
      const bool var_zero = va == 0 && vb == 0;
      const bool mean_zero = ma == 0 && mb == 0;
      if (var_zero && mean_zero) {
        q = 1;
      } else if (var_zero) {
        q = 2 * ma * mb / (ma * ma + mb * mb);
      } else if (mean_zero) {
        q = 2 * cab / (va + vb);
      } else {
        q = 4 * cab * ma * mb / ((va + vb) * (ma * ma + mb * mb));
      }
      sum += std::clamp(q, -1.0L, 1.0L);
      count += 1;
    }
  }
  return static_cast<double>(sum / count);
}

/// Linear interpolation through `pts` at x; pts sorted by x.
inline long double interp(const std::vector<Vertex>& pts, long double x) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (x <= pts[i].x) {
      const long double t = (x - pts[i - 1].x) / (static_cast<long double>(pts[i].x) - pts[i - 1].x);
      return pts[i - 1].y + t * (static_cast<long double>(pts[i].y) - pts[i - 1].y);
    }
  }
  return pts.back().y;
}

/// Squared error over every grid level k/255 in [front.x, back.x] between the
/// curve through `all` and the curve through `kept`, divided by 256.
inline double subset_mse(const std::vector<Vertex>& all, const std::vector<Vertex>& kept) {
  const int k0 = static_cast<int>(std::lround(all.front().x * 255.0));
  const int k1 = static_cast<int>(std::lround(all.back().x * 255.0));
  long double total = 0;
  for (int k = k0; k <= k1; ++k) {
    const long double x = k / 255.0L;
    const long double d = interp(all, x) - interp(kept, x);
    total += d * d;
  }
  return static_cast<double>(total / 256.0L);
}

/// Minimum subset_mse over every m-vertex subset keeping both endpoints.
inline double exhaustive_coarsen_mse(const std::vector<Vertex>& pts, std::size_t m) {
  const std::size_t n = pts.size();
  const std::size_t inner = n - 2, pick = m - 2;
  std::vector<bool> mask(inner, false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(pick), true);
  double best = INFINITY;
  do {
    std::vector<Vertex> kept{pts.front()};
    for (std::size_t i = 0; i < inner; ++i) {
      if (mask[i]) kept.push_back(pts[i + 1]);
    }
    kept.push_back(pts.back());
    best = std::min(best, subset_mse(pts, kept));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

/// n monotone breakpoints on distinct grid levels including 0 and 255.
inline std::vector<Vertex> random_breakpoints(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> levels{0, 255};
  std::uniform_int_distribution<int> level(1, 254);
  while (levels.size() < n) {
    const int k = level(rng);
    if (std::find(levels.begin(), levels.end(), k) == levels.end()) levels.push_back(k);
  }
  std::sort(levels.begin(), levels.end());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> ys(n);
  for (auto& y : ys) y = u(rng);
  std::sort(ys.begin(), ys.end());
  std::vector<Vertex> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({levels[i] / 255.0, ys[i]});
  return pts;
}

/// Levels where the inclusive-renormalized table of `h` changes slope,
/// computed on integer cumulative counts, plus levels 0 and 255.
inline std::vector<int> integer_slope_changes(const Histogram& h) {
  const auto cum = h.cumulative();
  const int lo = h.lowest_populated(), hi = h.highest_populated();
  std::vector<long long> c(256);
  for (int k = 0; k < 256; ++k) {
    if (k <= lo) {
      c[k] = 0;
    } else if (k >= hi) {
      c[k] = static_cast<long long>(h.total - cum[lo]);
    } else {
      c[k] = static_cast<long long>(cum[k] - cum[lo]);
    }
  }
  std::vector<int> out{0};
  for (int k = 1; k < 255; ++k) {
    if (c[k] - c[k - 1] != c[k + 1] - c[k]) out.push_back(k);
  }
  out.push_back(255);
  return out;
}

}  // namespace hebs::test
