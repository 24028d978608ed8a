#include "hebs/display.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace hebs {

namespace {

constexpr double kOverdriveTolerance = 1e-12;

}  // namespace

VoltageLadder::VoltageLadder(std::vector<LadderTap> taps, std::optional<int> dac_bits)
    : taps_(std::move(taps)), dac_bits_(dac_bits) {
  if (taps_.size() < 2) throw Error("ladder needs a bottom reference and at least one source");
  for (std::size_t i = 0; i < taps_.size(); ++i) {
    if (!(taps_[i].level >= 0.0 && taps_[i].level <= 1.0)) throw Error("ladder level outside [0, V_dd]");
    if (i > 0 && !(taps_[i - 1].x < taps_[i].x)) throw Error("ladder taps must have increasing x");
  }
}

std::vector<double> VoltageLadder::levels() const {
  std::vector<double> out;
  out.reserve(taps_.size() - 1);
  for (std::size_t i = 1; i < taps_.size(); ++i) out.push_back(taps_[i].level);
  return out;
}

double VoltageLadder::transmissivity(double x) const {
  if (x <= taps_.front().x) return taps_.front().level;
  if (x >= taps_.back().x) return taps_.back().level;
  auto it = std::upper_bound(taps_.begin(), taps_.end(), x,
                             [](double value, const LadderTap& t) { return value < t.x; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  if (x == lo.x) return lo.level;
  return lo.level + (hi.level - lo.level) * ((x - lo.x) / (hi.x - lo.x));
}

double quantize_level(double v, int bits) {
  const double scale = std::ldexp(1.0, bits);
  return std::clamp(std::nearbyint(v * scale) / scale, 0.0, 1.0);
}

VoltageLadder ladder_from_curve(const PiecewiseLinearCurve& curve, double beta, int sources,
                                std::optional<int> dac_bits) {
  if (!(beta > 0.0 && beta <= 1.0)) throw Error("ladder: beta must lie in (0, 1]");
  if (sources < 1) throw Error("ladder: need at least one source");
  if (dac_bits && (*dac_bits < 1 || *dac_bits > 30)) throw Error("ladder: dac_bits must lie in [1, 30]");
  if (curve.size() > static_cast<std::size_t>(sources) + 1) {
    throw Error("ladder: curve has " + std::to_string(curve.size()) + " vertices, ladder holds " +
                std::to_string(sources + 1));
  }
  for (const auto& v : curve.vertices()) {
    if (v.y > beta * (1.0 + kOverdriveTolerance)) {
      throw Error("ladder: vertex y exceeds beta, reference voltage would exceed V_dd");
    }
  }

  std::vector<Vertex> points = curve.vertices();
  while (points.size() < static_cast<std::size_t>(sources) + 1) {
    std::size_t widest = 0;
    for (std::size_t i = 1; i + 1 < points.size(); ++i) {
      if (points[i + 1].x - points[i].x > points[widest + 1].x - points[widest].x) widest = i;
    }
    const Vertex& a = points[widest];
    const Vertex& b = points[widest + 1];
    const double mid = a.x + (b.x - a.x) / 2.0;
    const Vertex inserted{mid, a.y + (b.y - a.y) * ((mid - a.x) / (b.x - a.x))};
    points.insert(points.begin() + static_cast<std::ptrdiff_t>(widest) + 1, inserted);
  }

  std::vector<LadderTap> taps;
  taps.reserve(points.size());
  for (const auto& p : points) {
    double level = std::min(1.0, p.y / beta);
    if (dac_bits) level = quantize_level(level, *dac_bits);
    taps.push_back({p.x, level});
  }
  return VoltageLadder(std::move(taps), dac_bits);
}

DisplayFrame render(const Image& img, const PiecewiseLinearCurve& curve, double beta,
                    const VoltageLadder& ladder) {
  if (!(beta > 0.0 && beta <= 1.0)) throw Error("render: beta must lie in (0, 1]");
  std::array<double, kLevels> trans{};
  std::array<double, kLevels> lum{};
  std::array<double, kLevels> err{};
  for (int k = 0; k < kLevels; ++k) {
    const double x = from_code(k);
    trans[k] = ladder.transmissivity(x);
    lum[k] = std::min(1.0, beta * trans[k]);
    err[k] = std::abs(lum[k] - curve(x));
  }

  DisplayFrame frame;
  frame.beta = beta;
  const auto samples = img.samples();
  frame.transmissivity.resize(samples.size());
  std::vector<double> luminance(samples.size());
  std::array<bool, kLevels> seen{};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto code = to_code(samples[i]);
    frame.transmissivity[i] = trans[code];
    luminance[i] = lum[code];
    seen[code] = true;
  }
  for (int k = 0; k < kLevels; ++k) {
    if (seen[k]) frame.quantization_error_max = std::max(frame.quantization_error_max, err[k]);
  }
  frame.luminance = Image(img.width(), img.height(), img.channels(), std::move(luminance));
  return frame;
}

}  // namespace hebs
