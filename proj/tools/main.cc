#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "corpus.h"
#include "hebs/pipeline.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  double d_max = 0.10;
  std::vector<double> levels{0.05, 0.10, 0.20};
  int segments = 10;
  int sources = 10;
  int dac_bits = 10;  // 0: unquantized
  std::string cdf_mode = "inclusive-renormalized";
  std::string distortion_map = "half-complement";
  std::string curve;
  std::string out;
  std::string power_model;
  bool compare = false;
  bool include_panel = false;
  double beta_floor = 0.0;
  unsigned threads = 0;

  hebs::PipelineConfig pipeline() const {
    hebs::PipelineConfig cfg;
    cfg.transform.vertices = static_cast<std::size_t>(segments) + 1;
    cfg.transform.cdf_mode = hebs::parse_cdf_mode(cdf_mode);
    cfg.quality.distortion_map = hebs::parse_distortion_map(distortion_map);
    cfg.sources = sources;
    cfg.dac_bits = dac_bits > 0 ? std::optional<int>(dac_bits) : std::nullopt;
    cfg.beta_floor = beta_floor;
    cfg.include_panel = include_panel;
    if (!power_model.empty()) cfg.power = hebs::load_power_models(power_model);
    if (!curve.empty()) cfg.curve = hebs::load_curve(curve);
    cfg.validate();
    return cfg;
  }

  ordered_json to_json() const {
    ordered_json j;
    j["tool"] = "hebs";
    j["version"] = HEBS_VERSION;
    j["command"] = command;
    j["inputs"] = inputs;
    if (command == "optimize") j["d_max"] = d_max;
    if (command == "report") {
      j["levels"] = levels;
      j["compare"] = compare;
    }
    j["segments"] = segments;
    j["vertices"] = segments + 1;
    j["sources"] = sources;
    j["dac_bits"] = dac_bits > 0 ? ordered_json(dac_bits) : ordered_json(nullptr);
    j["cdf_mode"] = cdf_mode;
    j["distortion_map"] = distortion_map;
    j["range_mode"] = curve.empty() ? "per-image-bisection" : "curve";
    j["curve"] = curve.empty() ? ordered_json(nullptr) : ordered_json(curve);
    j["beta_floor"] = beta_floor;
    j["include_panel"] = include_panel;
    j["power_model"] = power_model.empty() ? ordered_json(nullptr) : ordered_json(power_model);
    j["out"] = out;
    return j;
  }
};

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw hebs::IoError("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw hebs::IoError("write failed for " + path.string());
}

std::vector<fs::path> as_paths(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

int cmd_optimize(const RunConfig& rc) {
  const auto cfg = rc.pipeline();
  const fs::path input = rc.inputs.at(0);
  const auto img = hebs::load_image(input);
  const auto plan = hebs::run_hebs(img, rc.d_max, cfg);

  const fs::path out_dir = rc.out;
  fs::create_directories(out_dir);
  const auto image_path = out_dir / (input.stem().string() + "_hebs" + input.extension().string());
  hebs::save_image(plan.transformed, image_path);

  ordered_json j;
  j["run"] = rc.to_json();
  j["image"] = {{"path", input.string()},
                {"width", img.width()},
                {"height", img.height()},
                {"channels", img.channels()},
                {"output", image_path.string()}};
  j["plan"] = hebs::to_json(plan);
  write_json(out_dir / "plan.json", j);

  std::string summary;
  summary += "image        " + input.string() + "\n";
  summary += "d_max        " + hebs::tools::format_fixed(rc.d_max, 4) + "\n";
  summary += "range R      " + hebs::tools::format_fixed(plan.range, 6) + "\n";
  summary += "beta         " + hebs::tools::format_fixed(plan.beta, 6) + "\n";
  summary += "distortion   " + hebs::tools::format_fixed(plan.achieved_distortion, 6) + "\n";
  summary += "saving       " + hebs::tools::format_fixed(100.0 * plan.power.saving_fraction, 2) + " %\n";
  for (const auto& w : plan.warnings) summary += "warning      " + w + "\n";
  std::ofstream(out_dir / "summary.txt", std::ios::trunc) << summary;
  std::cout << summary;
  return 0;
}

int cmd_characterize(const RunConfig& rc) {
  const auto cfg = rc.pipeline();
  const auto images = hebs::tools::list_images(as_paths(rc.inputs));
  if (images.size() < 2) throw hebs::Error("characterize needs at least two images");
  const auto ranges = hebs::default_ranges();
  std::vector<hebs::ImageSweep> sweeps(images.size());
  hebs::tools::parallel_for(images.size(), rc.threads, [&](std::size_t i) {
    const auto img = hebs::load_image(images[i]);
    sweeps[i].name = images[i].stem().string();
    for (const auto& s : hebs::sweep(img, ranges, cfg.transform, cfg.quality)) {
      sweeps[i].distortion.push_back(s.distortion);
    }
  });
  std::string corpus_id;
  for (const auto& s : sweeps) corpus_id += (corpus_id.empty() ? "" : ",") + s.name;
  const auto curve = hebs::fit(ranges, sweeps, corpus_id);

  const fs::path out_dir = rc.out;
  fs::create_directories(out_dir);
  const auto run = rc.to_json();
  hebs::write_curve_csv(curve, out_dir / "curve.csv", run.dump());
  hebs::write_curve_json(curve, out_dir / "curve.json", run);

  std::vector<hebs::tools::Series> series;
  std::vector<double> avg;
  for (double r : ranges) avg.push_back(curve.average(r));
  series.push_back({"average (fit)", ranges, avg});
  series.push_back({"worst case", ranges, curve.worst_envelope});
  for (const auto& s : curve.samples) series.push_back({s.name, ranges, s.distortion});
  hebs::tools::write_svg_plot(out_dir / "distortion_vs_range.svg", "Distortion vs dynamic range", "range R",
                              "distortion D", series, run);

  std::printf("%-14s", "R");
  for (double r : ranges) std::printf(" %6.2f", r);
  std::printf("\n%-14s", "D_avg");
  for (double v : avg) std::printf(" %6.3f", v);
  std::printf("\n%-14s", "D_worst");
  for (double v : curve.worst_envelope) std::printf(" %6.3f", v);
  std::printf("\nwrote %s\n", (out_dir / "curve.csv").string().c_str());
  return 0;
}

int cmd_report(const RunConfig& rc) {
  const auto cfg = rc.pipeline();
  const auto images = hebs::tools::list_images(as_paths(rc.inputs));
  if (images.empty()) throw hebs::Error("no images found");
  const auto report = hebs::tools::build_report(images, rc.levels, cfg, rc.compare, rc.threads);

  const fs::path out_dir = rc.out;
  fs::create_directories(out_dir);
  const auto run = rc.to_json();
  hebs::tools::write_report_csv(report, out_dir / "report.csv", run);
  hebs::tools::write_report_markdown(report, out_dir / "report.md", run);

  std::vector<hebs::tools::Series> series;
  const char* names[] = {"HEBS", "brightness", "contrast", "band"};
  for (std::size_t m = 0; m < (rc.compare ? 4u : 1u); ++m) {
    series.push_back({std::string(names[m]) + " (average)", rc.levels, report.average(m)});
  }
  hebs::tools::write_svg_plot(out_dir / "saving_vs_budget.svg", "Power saving vs distortion budget", "D_max",
                              "saving fraction", series, run);

  std::printf("%-14s", "image");
  for (double l : rc.levels) std::printf("  D=%4.0f%%", 100.0 * l);
  std::printf("\n");
  for (const auto& row : report.rows) {
    std::printf("%-14s", row.image.c_str());
    for (const auto& c : row.cells) std::printf("  %6.2f%%", 100.0 * c.methods[0].saving);
    std::printf("\n");
  }
  std::printf("%-14s", "average");
  for (double v : report.average()) std::printf("  %6.2f%%", 100.0 * v);
  std::printf("\nwrote %s\n", (out_dir / "report.csv").string().c_str());
  return 0;
}

void add_common(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--segments", rc.segments, "Segments of the coarsened transfer curve (vertices = segments + 1)")
      ->check(CLI::Range(1, 255));
  cmd->add_option("--sources", rc.sources, "Controllable reference voltages k")->check(CLI::Range(1, 255));
  cmd->add_option("--dac-bits", rc.dac_bits, "DAC resolution of the ladder; 0 leaves levels unquantized")
      ->check(CLI::Range(0, 24));
  cmd->add_option("--cdf-mode", rc.cdf_mode, "inclusive-renormalized | exclusive-prefix")
      ->check(CLI::IsMember({"inclusive-renormalized", "exclusive-prefix"}));
  cmd->add_option("--distortion-map", rc.distortion_map, "half-complement | complement-clamped")
      ->check(CLI::IsMember({"half-complement", "complement-clamped"}));
  cmd->add_option("--curve", rc.curve, "Distortion curve (curve.json or curve.csv); selects curve range mode")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", rc.out, "Output directory (default: $HEBS_OUT_DIR or ./hebs_out)");
  cmd->add_option("--beta-floor", rc.beta_floor, "Lower bound on the backlight factor")->check(CLI::Range(0.0, 0.999));
  cmd->add_flag("--include-panel", rc.include_panel, "Count the panel power change in the saving");
  cmd->add_option("--power-model", rc.power_model, "JSON file overriding power coefficients")
      ->check(CLI::ExistingFile);
  cmd->add_option("--threads", rc.threads, "Worker threads for corpus commands (0: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Histogram-equalized backlight scaling"};
  app.set_version_flag("--version", std::string(HEBS_VERSION));
  app.require_subcommand(1);
  RunConfig rc;

  auto* optimize = app.add_subcommand("optimize", "Pick backlight and transfer curve for one image");
  optimize->add_option("input", rc.inputs, "Input image (PNG or PGM)")->required()->expected(1)->check(CLI::ExistingFile);
  optimize->add_option("--dmax", rc.d_max, "Distortion budget in [0, 1]")->check(CLI::Range(0.0, 1.0));
  add_common(optimize, rc);

  auto* characterize = app.add_subcommand("characterize", "Sweep a corpus and fit the distortion curve");
  characterize->add_option("inputs", rc.inputs, "Images or directories")->required();
  add_common(characterize, rc);

  auto* report = app.add_subcommand("report", "Savings table over a corpus and distortion levels");
  report->add_option("inputs", rc.inputs, "Images or directories")->required();
  report->add_option("--levels", rc.levels, "Distortion levels")->delimiter(',')->check(CLI::Range(0.0, 1.0));
  report->add_flag("--compare", rc.compare, "Add brightness, contrast and band baselines");
  add_common(report, rc);

  CLI11_PARSE(app, argc, argv);

  if (rc.out.empty()) {
    const char* env = std::getenv("HEBS_OUT_DIR");
    rc.out = env && *env ? env : "hebs_out";
  }
  try {
    if (optimize->parsed()) {
      rc.command = "optimize";
      return cmd_optimize(rc);
    }
    if (characterize->parsed()) {
      rc.command = "characterize";
      return cmd_characterize(rc);
    }
    rc.command = "report";
    return cmd_report(rc);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hebs: %s\n", e.what());
    return 1;
  }
}
