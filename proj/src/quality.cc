#include "hebs/quality.h"

#include <algorithm>
#include <numeric>

namespace hebs {

namespace {

struct Grid {
  int width;
  int height;
  int window;
  int stride;
  int cols;
  int rows;

  Grid(int w, int h, const QualityConfig& cfg)
      : width(w), height(h), window(cfg.window), stride(cfg.stride),
        cols((w - cfg.window) / cfg.stride + 1), rows((h - cfg.window) / cfg.stride + 1) {}

  std::size_t count() const { return static_cast<std::size_t>(cols) * rows; }
};

void validate(const QualityConfig& cfg, int width, int height) {
  if (cfg.window < 1 || cfg.window > std::min(width, height)) {
    throw Error("quality window must lie in [1, min(width, height)]");
  }
  if (cfg.stride < 1) throw Error("quality stride must be >= 1");
}

// Sums of f(x, y) over every window position. Separable and evaluated directly
// per window, so no large running sums are differenced.
template <typename F>
std::vector<double> window_sums(const Grid& g, F&& f) {
  std::vector<double> horiz(static_cast<std::size_t>(g.height) * g.cols);
  for (int y = 0; y < g.height; ++y) {
    for (int i = 0; i < g.cols; ++i) {
      const int x0 = i * g.stride;
      double s = 0.0;
      for (int dx = 0; dx < g.window; ++dx) s += f(static_cast<std::size_t>(y) * g.width + x0 + dx);
      horiz[static_cast<std::size_t>(y) * g.cols + i] = s;
    }
  }
  std::vector<double> out(g.count());
  for (int j = 0; j < g.rows; ++j) {
    const int y0 = j * g.stride;
    for (int i = 0; i < g.cols; ++i) {
      double s = 0.0;
      for (int dy = 0; dy < g.window; ++dy) s += horiz[static_cast<std::size_t>(y0 + dy) * g.cols + i];
      out[static_cast<std::size_t>(j) * g.cols + i] = s;
    }
  }
  return out;
}

// 1 where every sample of the window is identical.
std::vector<unsigned char> flat_windows(const Grid& g, std::span<const double> plane) {
  std::vector<double> hmin(static_cast<std::size_t>(g.height) * g.cols);
  std::vector<double> hmax(hmin.size());
  for (int y = 0; y < g.height; ++y) {
    const double* row = plane.data() + static_cast<std::size_t>(y) * g.width;
    for (int i = 0; i < g.cols; ++i) {
      const auto [lo, hi] = std::minmax_element(row + i * g.stride, row + i * g.stride + g.window);
      hmin[static_cast<std::size_t>(y) * g.cols + i] = *lo;
      hmax[static_cast<std::size_t>(y) * g.cols + i] = *hi;
    }
  }
  std::vector<unsigned char> flat(g.count());
  for (int j = 0; j < g.rows; ++j) {
    for (int i = 0; i < g.cols; ++i) {
      double lo = hmin[static_cast<std::size_t>(j) * g.stride * g.cols + i];
      double hi = hmax[static_cast<std::size_t>(j) * g.stride * g.cols + i];
      for (int dy = 1; dy < g.window; ++dy) {
        const std::size_t idx = static_cast<std::size_t>(j * g.stride + dy) * g.cols + i;
        lo = std::min(lo, hmin[idx]);
        hi = std::max(hi, hmax[idx]);
      }
      flat[static_cast<std::size_t>(j) * g.cols + i] = lo == hi;
    }
  }
  return flat;
}

// First sample of each window; the exact mean of a flat window.
double window_origin(const Grid& g, std::span<const double> plane, std::size_t w) {
  const std::size_t j = w / g.cols;
  const std::size_t i = w % g.cols;
  return plane[j * g.stride * g.width + i * g.stride];
}

struct PlaneStats {
  std::vector<double> centered;
  std::vector<double> mean;
  std::vector<double> var;
  std::vector<unsigned char> flat;
};

PlaneStats plane_stats(const Grid& g, std::span<const double> plane) {
  PlaneStats st;
  const double offset = std::accumulate(plane.begin(), plane.end(), 0.0) / static_cast<double>(plane.size());
  st.centered.resize(plane.size());
  std::transform(plane.begin(), plane.end(), st.centered.begin(), [offset](double v) { return v - offset; });
  const double n = static_cast<double>(g.window) * g.window;
  const auto& c = st.centered;
  const auto sum = window_sums(g, [&](std::size_t p) { return c[p]; });
  const auto sum_sq = window_sums(g, [&](std::size_t p) { return c[p] * c[p]; });
  st.flat = flat_windows(g, plane);
  st.mean.resize(g.count());
  st.var.resize(g.count());
  for (std::size_t w = 0; w < g.count(); ++w) {
    if (st.flat[w]) {
      st.mean[w] = window_origin(g, plane, w);
      st.var[w] = 0.0;
    } else {
      const double m = sum[w] / n;
      st.mean[w] = m + offset;
      st.var[w] = std::max(0.0, sum_sq[w] / n - m * m);
    }
  }
  return st;
}

}  // namespace

std::string_view to_string(DistortionMap map) {
  return map == DistortionMap::kHalfComplement ? "half-complement" : "complement-clamped";
}

DistortionMap parse_distortion_map(std::string_view name) {
  if (name == "half-complement") return DistortionMap::kHalfComplement;
  if (name == "complement-clamped") return DistortionMap::kComplementClamped;
  throw Error("unknown distortion map: " + std::string(name));
}

double distortion_from_quality(double q, DistortionMap map) {
  if (map == DistortionMap::kHalfComplement) return std::clamp((1.0 - q) / 2.0, 0.0, 1.0);
  return std::clamp(1.0 - q, 0.0, 1.0);
}

double window_quality(double mean_a, double mean_b, double var_a, double var_b, double cov_ab) {
  const double contrast = var_a + var_b;
  const double luminance = mean_a * mean_a + mean_b * mean_b;
  double q;
  if (contrast == 0.0 && luminance == 0.0) {
    q = 1.0;
  } else if (contrast == 0.0) {
    q = 2.0 * (mean_a * mean_b) / luminance;
  } else if (luminance == 0.0) {
    q = 2.0 * cov_ab / contrast;
  } else {
    q = 4.0 * cov_ab * (mean_a * mean_b) / (contrast * luminance);
  }
  return std::clamp(q, -1.0, 1.0);
}

QualityReference::QualityReference(const Image& reference, QualityConfig cfg)
    : cfg_(cfg), width_(reference.width()), height_(reference.height()) {
  validate(cfg_, width_, height_);
  const auto luma = reference.luminance();
  luma_.assign(luma.begin(), luma.end());
  auto st = plane_stats(Grid(width_, height_, cfg_), luma_);
  // Keep only what candidates need; luma_ becomes the centered plane.
  luma_ = std::move(st.centered);
  mean_ = std::move(st.mean);
  var_ = std::move(st.var);
  flat_ = std::move(st.flat);
}

double QualityReference::uqi(std::span<const double> candidate) const {
  if (candidate.size() != luma_.size()) throw Error("uqi: dimension mismatch");
  const Grid g(width_, height_, cfg_);
  const auto cand = plane_stats(g, candidate);
  const double n = static_cast<double>(g.window) * g.window;
  const auto& a = luma_;
  const auto& b = cand.centered;
  const auto sum_ab = window_sums(g, [&](std::size_t p) { return a[p] * b[p]; });
  const auto sum_a = window_sums(g, [&](std::size_t p) { return a[p]; });
  const auto sum_b = window_sums(g, [&](std::size_t p) { return b[p]; });

  double total = 0.0;
  for (std::size_t w = 0; w < g.count(); ++w) {
    double cov = 0.0;
    if (!flat_[w] && !cand.flat[w]) cov = sum_ab[w] / n - (sum_a[w] / n) * (sum_b[w] / n);
    total += window_quality(mean_[w], cand.mean[w], var_[w], cand.var[w], cov);
  }
  return total / static_cast<double>(g.count());
}

double QualityReference::uqi(const Image& candidate) const {
  if (candidate.width() != width_ || candidate.height() != height_) throw Error("uqi: dimension mismatch");
  return uqi(candidate.luminance());
}

double QualityReference::distortion(const Image& candidate) const {
  return distortion_from_quality(uqi(candidate), cfg_.distortion_map);
}

double QualityReference::distortion(std::span<const double> candidate_luma) const {
  return distortion_from_quality(uqi(candidate_luma), cfg_.distortion_map);
}

double uqi(const Image& a, const Image& b, const QualityConfig& cfg) {
  if (!a.same_shape(b)) throw Error("uqi: dimension mismatch");
  return QualityReference(a, cfg).uqi(b);
}

double distortion(const Image& original, const Image& transformed, const QualityConfig& cfg) {
  return distortion_from_quality(uqi(original, transformed, cfg), cfg.distortion_map);
}

}  // namespace hebs
