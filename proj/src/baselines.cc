#include "hebs/baselines.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace hebs {

namespace {

constexpr int kBetaSteps = 256;

struct Candidate {
  BaselineSpec spec;
  double distortion;
};

double evaluate(const Image& img, const QualityReference& ref, const BaselineSpec& spec) {
  return ref.distortion(simulate_baseline(img, spec));
}

// g_l spread uniformly over the admissible [0, 1 - beta].
BaselineSpec band_at(double beta, int i) {
  const double g_l = kBandGrid > 1 ? (1.0 - beta) * i / (kBandGrid - 1) : 0.0;
  return BaselineSpec::band(g_l, std::min(1.0, g_l + beta));
}

// Best setting at this beta that meets the budget, if any. With `exhaustive`
// false the band search stops at the first admissible position.
std::optional<Candidate> try_beta(const Image& img, const QualityReference& ref, BaselineKind kind, double beta,
                                  double d_max, bool exhaustive) {
  if (kind != BaselineKind::kBand) {
    const BaselineSpec spec{kind, beta};
    const double d = evaluate(img, ref, spec);
    if (d <= d_max) return Candidate{spec, d};
    return std::nullopt;
  }
  std::optional<Candidate> best;
  const int positions = beta >= 1.0 ? 1 : kBandGrid;
  for (int i = 0; i < positions; ++i) {
    const auto spec = band_at(beta, i);
    const double d = evaluate(img, ref, spec);
    if (d <= d_max && (!best || d < best->distortion)) {
      best = Candidate{spec, d};
      if (!exhaustive) break;
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kBrightness: return "brightness";
    case BaselineKind::kContrast: return "contrast";
    case BaselineKind::kBand: return "band";
  }
  return "unknown";
}

TransferTable baseline_transfer(const BaselineSpec& spec) {
  const double beta = spec.beta;
  if (!(beta > 0.0 && beta <= 1.0)) throw Error("baseline: beta must lie in (0, 1]");
  TransferTable t;
  t.g_min = 0.0;
  t.g_max = 1.0;
  for (int k = 0; k < kLevels; ++k) {
    const double x = from_code(k);
    switch (spec.kind) {
      case BaselineKind::kBrightness:
        t.values[k] = std::min(1.0, x + (1.0 - beta));
        break;
      case BaselineKind::kContrast:
        t.values[k] = beta >= 1.0 ? x : std::min(1.0, x / beta);
        break;
      case BaselineKind::kBand:
        if (!(spec.g_l >= 0.0 && spec.g_l < spec.g_u && spec.g_u <= 1.0) ||
            std::abs((spec.g_u - spec.g_l) - beta) > 1e-12) {
          throw Error("baseline: band needs 0 <= g_l < g_u <= 1 and beta = g_u - g_l");
        }
        if (x <= spec.g_l) {
          t.values[k] = 0.0;
        } else if (x >= spec.g_u) {
          t.values[k] = 1.0;
        } else {
          t.values[k] = std::clamp((x - spec.g_l) / (spec.g_u - spec.g_l), 0.0, 1.0);
        }
        break;
    }
  }
  return t;
}

Image simulate_baseline(const Image& img, const BaselineSpec& spec) {
  const auto table = baseline_transfer(spec);
  TransferTable shown = table;
  for (auto& v : shown.values) v = spec.beta * v;
  return apply_transfer(img, shown);
}

BaselineResult best_baseline_beta(const Image& img, const QualityReference& ref, BaselineKind kind,
                                  double d_max) {
  // Invariant: step `hi` meets the budget (beta = 1 is the identity), `lo` does not.
  int lo = 0;
  int hi = kBetaSteps;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (try_beta(img, ref, kind, static_cast<double>(mid) / kBetaSteps, d_max, false)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double beta = static_cast<double>(hi) / kBetaSteps;
  BaselineResult r;
  if (auto best = try_beta(img, ref, kind, beta, d_max, true)) {
    r.spec = best->spec;
    r.distortion = best->distortion;
  } else {
    r.spec = kind == BaselineKind::kBand ? BaselineSpec::band(0.0, 1.0) : BaselineSpec{kind, 1.0};
    r.distortion = evaluate(img, ref, r.spec);
  }
  r.fallback = hi == kBetaSteps;
  r.table = baseline_transfer(r.spec);
  return r;
}

BaselineResult best_baseline_beta(const Image& img, BaselineKind kind, double d_max, const QualityConfig& cfg) {
  return best_baseline_beta(img, QualityReference(img, cfg), kind, d_max);
}

}  // namespace hebs
