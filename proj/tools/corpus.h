#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hebs/pipeline.h"

namespace hebs::tools {

/// Image files under `inputs` (directories are listed one level deep),
/// sorted by filename.
std::vector<std::filesystem::path> list_images(const std::vector<std::filesystem::path>& inputs);

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0: hardware).
/// The first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

struct ReportRow {
  std::string image;
  std::vector<Comparison> cells;  ///< one per level
};

struct Report {
  std::vector<double> levels;
  bool compare = false;
  std::vector<ReportRow> rows;

  /// Mean HEBS saving per level.
  std::vector<double> average() const;
  /// Mean saving of `method` per level (index into Comparison::methods).
  std::vector<double> average(std::size_t method) const;
};

/// HEBS (and baselines when `compare`) for every image and level.
Report build_report(const std::vector<std::filesystem::path>& images, const std::vector<double>& levels,
                    const PipelineConfig& cfg, bool compare, unsigned threads);

void write_report_csv(const Report& report, const std::filesystem::path& path, const nlohmann::ordered_json& run);
void write_report_markdown(const Report& report, const std::filesystem::path& path,
                           const nlohmann::ordered_json& run);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line chart; `run` is embedded as an XML comment.
void write_svg_plot(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<Series>& series,
                    const nlohmann::ordered_json& run);

std::string format_fixed(double v, int digits);

}  // namespace hebs::tools
