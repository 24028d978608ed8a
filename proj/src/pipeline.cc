#include "hebs/pipeline.h"

#include <algorithm>
#include <cmath>

namespace hebs {

namespace {

ScalingPlan plan_for_range(const Image& img, const Histogram& hist, const QualityReference& ref, double d_max,
                           double range, const PipelineConfig& cfg) {
  ScalingPlan plan;
  plan.d_max = d_max;
  plan.range = range;
  plan.cdf_mode = cfg.transform.cdf_mode;
  plan.range_mode = cfg.range_mode();
  plan.distortion_map = cfg.quality.distortion_map;

  auto t = transform_for_range(hist, range, cfg.transform);
  plan.beta = backlight_factor_for_range(0.0, range, cfg.beta_floor);
  plan.ladder = ladder_from_curve(t.lambda.curve, plan.beta, cfg.sources, cfg.dac_bits);
  plan.transformed = apply_transfer(img, t.lambda_table);
  plan.achieved_distortion = ref.distortion(plan.transformed);
  plan.power = power_saving(cfg.power.ccfl, cfg.power.tft, plan.beta, plan.transformed, img, cfg.include_panel);
  plan.phi = std::move(t.phi);
  plan.lambda = std::move(t.lambda);
  return plan;
}

double next_range(double range, const PipelineConfig& cfg) {
  if (cfg.curve) {
    for (double r : cfg.curve->ranges) {
      if (r > range) return r;
    }
    return 1.0;
  }
  return std::min(1.0, range + 1.0 / kRangeSteps);
}

}  // namespace

std::string_view to_string(RangeMode mode) {
  return mode == RangeMode::kCurve ? "curve" : "per-image-bisection";
}

void PipelineConfig::validate() const {
  if (transform.vertices < 2) throw Error("vertex budget must be >= 2");
  if (sources < 1) throw Error("ladder needs at least one source");
  if (transform.vertices > static_cast<std::size_t>(sources) + 1) {
    throw Error("vertex budget " + std::to_string(transform.vertices) + " exceeds ladder capacity of " +
                std::to_string(sources + 1));
  }
  if (!(beta_floor >= 0.0 && beta_floor < 1.0)) throw Error("beta floor must lie in [0, 1)");
  if (!(slack >= 0.0)) throw Error("slack must be non-negative");
  if (max_retries < 0) throw Error("max_retries must be non-negative");
}

ScalingPlan identity_plan(const Image& img, double d_max, const PipelineConfig& cfg) {
  ScalingPlan plan;
  plan.d_max = d_max;
  plan.range = 1.0;
  plan.beta = 1.0;
  plan.identity = true;
  plan.cdf_mode = cfg.transform.cdf_mode;
  plan.range_mode = cfg.range_mode();
  plan.distortion_map = cfg.quality.distortion_map;
  plan.phi = TransferTable::identity();
  plan.phi.cdf_mode = cfg.transform.cdf_mode;
  plan.lambda.curve = PiecewiseLinearCurve::identity();
  plan.lambda.n = 2;
  plan.lambda.m = 2;
  plan.ladder = ladder_from_curve(plan.lambda.curve, 1.0, cfg.sources, cfg.dac_bits);
  plan.transformed = img;
  plan.achieved_distortion = 0.0;
  plan.power = power_saving(cfg.power.ccfl, cfg.power.tft, 1.0, img, img, cfg.include_panel);
  return plan;
}

ScalingPlan run_hebs(const Image& img, double d_max, const PipelineConfig& cfg) {
  cfg.validate();
  if (!(d_max >= 0.0 && d_max <= 1.0)) throw Error("d_max must lie in [0, 1]");
  const auto hist = histogram(img);
  const QualityReference ref(img, cfg.quality);

  const RangeLookup lookup = cfg.curve ? min_range_from_curve(*cfg.curve, d_max)
                                       : min_range_by_bisection(img, hist, ref, d_max, cfg.transform);
  if (lookup.unreachable) {
    auto plan = identity_plan(img, d_max, cfg);
    plan.predicted_distortion = lookup.distortion;
    plan.warnings.push_back("distortion budget unreachable even at full range; identity plan");
    return plan;
  }

  double range = lookup.range;
  ScalingPlan plan;
  for (int attempt = 0;; ++attempt) {
    plan = plan_for_range(img, hist, ref, d_max, range, cfg);
    plan.retries = attempt;
    if (plan.achieved_distortion <= d_max + cfg.slack) break;
    if (attempt == cfg.max_retries || range >= 1.0) {
      plan.warnings.push_back("achieved distortion exceeds budget plus slack after " + std::to_string(attempt) +
                              " retries");
      break;
    }
    range = next_range(range, cfg);
  }
  plan.predicted_distortion = lookup.distortion;
  return plan;
}

Comparison compare(const Image& img, double d_max, const PipelineConfig& cfg) {
  Comparison c;
  c.d_max = d_max;
  c.hebs = run_hebs(img, d_max, cfg);
  c.methods.push_back({"hebs", c.hebs.beta, c.hebs.achieved_distortion, c.hebs.power.saving_fraction,
                       c.hebs.identity});

  const QualityReference ref(img, cfg.quality);
  const double original_mean = mean_luminance(img);
  for (auto kind : {BaselineKind::kBrightness, BaselineKind::kContrast, BaselineKind::kBand}) {
    auto r = best_baseline_beta(img, ref, kind, d_max);
    const double shown_mean = mean_luminance(simulate_baseline(img, r.spec));
    const auto power = power_saving(cfg.power.ccfl, cfg.power.tft, r.spec.beta, shown_mean, original_mean,
                                    cfg.include_panel);
    c.methods.push_back({std::string(to_string(kind)), r.spec.beta, r.distortion, power.saving_fraction, r.fallback});
    c.baselines.push_back(std::move(r));
  }
  c.hebs_below_band = c.methods[0].saving < c.methods[3].saving - kBandComparisonTolerance;
  return c;
}

nlohmann::ordered_json to_json(const TransferTable& t) {
  return {{"g_min", t.g_min},
          {"g_max", t.g_max},
          {"cdf_mode", to_string(t.cdf_mode)},
          {"values", std::vector<double>(t.values.begin(), t.values.end())}};
}

TransferTable table_from_json(const nlohmann::json& j) {
  try {
    TransferTable t;
    const auto values = j.at("values").get<std::vector<double>>();
    if (values.size() != kLevels) throw FormatError("transfer table needs 256 values");
    std::copy(values.begin(), values.end(), t.values.begin());
    t.g_min = j.at("g_min").get<double>();
    t.g_max = j.at("g_max").get<double>();
    t.cdf_mode = parse_cdf_mode(j.at("cdf_mode").get<std::string>());
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("transfer table: ") + e.what());
  }
}

nlohmann::ordered_json to_json(const PiecewiseLinearCurve& c) {
  auto vertices = nlohmann::ordered_json::array();
  for (const auto& v : c.vertices()) vertices.push_back({v.x, v.y});
  return vertices;
}

PiecewiseLinearCurve curve_from_vertices_json(const nlohmann::json& j) {
  try {
    std::vector<Vertex> vertices;
    for (const auto& v : j) vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    return PiecewiseLinearCurve(std::move(vertices));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("curve: ") + e.what());
  }
}

nlohmann::ordered_json to_json(const VoltageLadder& l) {
  auto taps = nlohmann::ordered_json::array();
  for (const auto& t : l.taps()) taps.push_back({{"x", t.x}, {"level", t.level}});
  nlohmann::ordered_json j;
  j["k"] = l.sources();
  j["dac_bits"] = l.dac_bits() ? nlohmann::ordered_json(*l.dac_bits()) : nlohmann::ordered_json(nullptr);
  j["levels"] = l.levels();
  j["taps"] = std::move(taps);
  return j;
}

nlohmann::ordered_json to_json(const PowerReport& r) {
  return {{"beta", r.beta},
          {"include_panel", r.include_panel},
          {"backlight_power", r.backlight_power},
          {"backlight_power_full", r.backlight_power_full},
          {"panel_power", r.panel_power},
          {"panel_power_full", r.panel_power_full},
          {"total_power", r.total_power},
          {"total_power_full", r.total_power_full},
          {"saving_fraction", r.saving_fraction},
          {"ccfl_knee_discontinuity", r.knee_discontinuity}};
}

nlohmann::ordered_json to_json(const ScalingPlan& p) {
  nlohmann::ordered_json j;
  j["d_max"] = p.d_max;
  j["range"] = p.range;
  j["beta"] = p.beta;
  j["achieved_distortion"] = p.achieved_distortion;
  j["predicted_distortion"] = p.predicted_distortion;
  j["identity"] = p.identity;
  j["retries"] = p.retries;
  j["warnings"] = p.warnings;
  j["modes"] = {{"cdf_mode", to_string(p.cdf_mode)},
                {"range_mode", to_string(p.range_mode)},
                {"distortion_map", to_string(p.distortion_map)}};
  j["phi"] = to_json(p.phi);
  j["lambda"] = {{"vertices", to_json(p.lambda.curve)},
                 {"mse", p.lambda.mse},
                 {"n", p.lambda.n},
                 {"m", p.lambda.m}};
  j["ladder"] = to_json(p.ladder);
  j["power"] = to_json(p.power);
  return j;
}

nlohmann::ordered_json to_json(const Comparison& c) {
  nlohmann::ordered_json j;
  j["d_max"] = c.d_max;
  auto methods = nlohmann::ordered_json::array();
  for (const auto& m : c.methods) {
    methods.push_back({{"method", m.method},
                       {"beta", m.beta},
                       {"distortion", m.distortion},
                       {"saving", m.saving},
                       {"fallback", m.fallback}});
  }
  j["methods"] = std::move(methods);
  auto baselines = nlohmann::ordered_json::array();
  for (const auto& b : c.baselines) {
    baselines.push_back({{"kind", to_string(b.spec.kind)},
                         {"beta", b.spec.beta},
                         {"g_l", b.spec.g_l},
                         {"g_u", b.spec.g_u},
                         {"selection", "bisection stand-in"}});
  }
  j["baselines"] = std::move(baselines);
  j["hebs_below_band"] = c.hebs_below_band;
  j["hebs_plan"] = to_json(c.hebs);
  return j;
}

}  // namespace hebs
