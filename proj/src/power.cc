#include "hebs/power.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

namespace hebs {

double CcflModel::knee_discontinuity() const {
  return std::abs((a_lin * c_s + c_lin) - (a_sat * c_s + c_sat));
}

double ccfl_power(const CcflModel& m, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw Error("ccfl_power: beta must lie in (0, 1]");
  const double p = beta <= m.c_s ? m.a_lin * beta + m.c_lin : m.a_sat * beta + m.c_sat;
  return std::max(0.0, p);
}

double tft_power(const TftModel& m, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error("tft_power: transmissivity must lie in [0, 1]");
  return m.a * t * t + m.b * t + m.c;
}

double backlight_factor_for_range(double g_min, double g_max, double floor) {
  if (!(g_min >= 0.0 && g_min < g_max && g_max <= 1.0)) throw Error("backlight factor: invalid range");
  return std::clamp(g_max, floor, 1.0);
}

PowerReport power_saving(const CcflModel& ccfl, const TftModel& tft, double beta, double displayed_mean,
                         double original_mean, bool include_panel) {
  PowerReport r;
  r.beta = beta;
  r.include_panel = include_panel;
  r.knee_discontinuity = ccfl.knee_discontinuity();
  r.backlight_power = ccfl_power(ccfl, beta);
  r.backlight_power_full = ccfl_power(ccfl, 1.0);
  r.panel_power = tft_power(tft, std::clamp(displayed_mean / beta, 0.0, 1.0));
  r.panel_power_full = tft_power(tft, std::clamp(original_mean, 0.0, 1.0));
  r.total_power = r.backlight_power;
  r.total_power_full = r.backlight_power_full;
  if (include_panel) r.total_power += r.panel_power - r.panel_power_full;
  r.saving_fraction = 1.0 - r.total_power / r.total_power_full;
  return r;
}

double mean_luminance(const Image& img) {
  const auto luma = img.luminance();
  return std::accumulate(luma.begin(), luma.end(), 0.0) / static_cast<double>(luma.size());
}

PowerReport power_saving(const CcflModel& ccfl, const TftModel& tft, double beta, const Image& displayed,
                         const Image& original, bool include_panel) {
  return power_saving(ccfl, tft, beta, mean_luminance(displayed), mean_luminance(original), include_panel);
}

PowerModels load_power_models(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open power model file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("power model file: " + std::string(e.what()));
  }
  PowerModels m;
  if (auto c = j.find("ccfl"); c != j.end()) {
    m.ccfl.a_lin = c->value("a_lin", m.ccfl.a_lin);
    m.ccfl.c_lin = c->value("c_lin", m.ccfl.c_lin);
    m.ccfl.a_sat = c->value("a_sat", m.ccfl.a_sat);
    m.ccfl.c_sat = c->value("c_sat", m.ccfl.c_sat);
    m.ccfl.c_s = c->value("c_s", m.ccfl.c_s);
    if (!(m.ccfl.c_s > 0.0 && m.ccfl.c_s <= 1.0)) throw FormatError("power model file: c_s must lie in (0, 1]");
  }
  if (auto t = j.find("tft"); t != j.end()) {
    m.tft.a = t->value("a", m.tft.a);
    m.tft.b = t->value("b", m.tft.b);
    m.tft.c = t->value("c", m.tft.c);
  }
  return m;
}

}  // namespace hebs
