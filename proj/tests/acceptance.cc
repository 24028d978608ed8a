// Acceptance checks, one line per criterion. Exit status is nonzero when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corpus.h"
#include "hebs/pipeline.h"
#include "support.h"

namespace fs = std::filesystem;
using namespace hebs;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(int id, bool pass, const std::string& what, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("AC%d %s  %s  [%s]\n", id, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void ac1() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<std::size_t> size(2, 12);
  double worst = 0.0;
  int cases = 0;
  for (int set = 0; set < 200; ++set) {
    const auto pts = test::random_breakpoints(rng, size(rng));
    for (std::size_t m = 2; m <= pts.size(); ++m) {
      worst = std::max(worst, std::abs(coarsen(pts, m).mse - test::exhaustive_coarsen_mse(pts, m)));
      ++cases;
    }
  }
  const double secs = seconds_since(t0);
  verdict(1, worst <= 1e-12 && secs < 60.0, "coarsening DP equals exhaustive subset search",
          std::to_string(cases) + " (set, m) cases, max |diff| " + fmt("%.3g", worst) + ", " + fmt("%.2f", secs) +
              " s");
}

void ac2() {
  const auto ramp = equalize(histogram(test::ramp_image()), 0.0, 1.0);
  double ramp_dev = 0.0;
  for (int k = 0; k < kLevels; ++k) ramp_dev = std::max(ramp_dev, std::abs(ramp[k] - k / 255.0));

  Histogram four;
  for (int k : {10, 80, 150, 220}) four.counts[k] = 25;
  four.total = 100;
  const auto t = equalize(four, 0.0, 0.6);
  const double expected[] = {0.0, 0.2, 0.4, 0.6};
  const int levels[] = {10, 80, 150, 220};
  double four_dev = 0.0;
  for (int i = 0; i < 4; ++i) four_dev = std::max(four_dev, std::abs(t[levels[i]] - expected[i]));

  std::mt19937_64 rng(77);
  int monotone = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto h = test::random_histogram(rng);
    bool ok = true;
    for (auto mode : {CdfMode::kInclusiveRenormalized, CdfMode::kExclusivePrefix}) {
      const auto e = equalize(h, 0.0, 0.1 + 0.9 * (i % 10) / 9.0, mode);
      for (int k = 1; k < kLevels; ++k) ok = ok && e[k - 1] <= e[k];
    }
    monotone += ok;
  }
  verdict(2, ramp_dev <= 1.0 / 256 && four_dev <= 1e-15 && monotone == 1000, "equalization fixed points",
          "ramp max dev " + fmt("%.3g", ramp_dev) + ", four-level max dev " + fmt("%.3g", four_dev) + ", monotone " +
              std::to_string(monotone) + "/1000");
}

void ac3() {
  const CcflModel c;
  const TftModel t;
  struct Check {
    double got, hand, stated;
  } checks[] = {
      {ccfl_power(c, 0.5), 1.96 * 0.5 - 0.2372, 0.7428},
      {ccfl_power(c, 1.0), 6.944 * 1.0 - 4.324, 2.6200},
      {tft_power(t, 0.0), 0.993, 0.993},
      {tft_power(t, 1.0), 0.02449 - 0.04984 + 0.993, 0.96765},
  };
  double worst = 0.0;
  for (const auto& k : checks) worst = std::max({worst, std::abs(k.got - k.hand), std::abs(k.got - k.stated)});
  verdict(3, worst <= 1e-9, "power model point checks", "max |diff| " + fmt("%.3g", worst));
}

void ac4() {
  std::mt19937_64 rng(4444);
  std::uniform_int_distribution<std::size_t> size(2, 11);
  double exact_dev = 0.0;
  double worst_ratio = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto img = i % 2 ? test::textured_image(rng, 40, 30) : test::random_image(rng, 40, 30);
    const PiecewiseLinearCurve lambda(test::random_breakpoints(rng, size(rng)));
    const double beta = lambda.max_y();
    if (beta <= 0.0) continue;
    const auto shown = apply_transfer(img, lambda.to_table());
    const auto ideal = render(img, lambda, beta, ladder_from_curve(lambda, beta, 10, std::nullopt));
    const auto quant = render(img, lambda, beta, ladder_from_curve(lambda, beta, 10, 10));
    for (std::size_t p = 0; p < img.samples().size(); ++p) {
      exact_dev = std::max(exact_dev, std::abs(ideal.luminance.samples()[p] - shown.samples()[p]));
      worst_ratio = std::max(worst_ratio, std::abs(quant.luminance.samples()[p] - shown.samples()[p]) /
                                              (beta * std::ldexp(1.0, -10)));
    }
  }
  verdict(4, exact_dev <= 1e-12 && worst_ratio <= 1.0, "brightness preservation",
          "unquantized max dev " + fmt("%.3g", exact_dev) + ", 10-bit dev / (beta 2^-10) max " +
              fmt("%.3f", worst_ratio));
}

void ac5(const std::vector<Image>& corpus) {
  std::mt19937_64 rng(55);
  std::vector<Image> images(corpus.begin(), corpus.end());
  while (images.size() < 20) images.push_back(test::textured_image(rng, 64, 64));
  images.resize(20);
  double self_dev = 0.0;
  for (const auto& img : images) self_dev = std::max(self_dev, std::abs(uqi(img, img) - 1.0));
  double asym = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto& a = images[i];
    const auto b = apply_transfer(a, equalize(histogram(a), 0.0, 0.3 + 0.03 * i));
    asym = std::max(asym, std::abs(uqi(a, b) - uqi(b, a)));
  }
  const double q = uqi(Image::gray(2, 2, {0, 1, 0, 1}), Image::gray(2, 2, {0, 1, 1, 0}), {2, 1});
  verdict(5, self_dev <= 1e-12 && asym <= 1e-12 && std::abs(q) <= 1e-9, "UQI correctness",
          "self max dev " + fmt("%.3g", self_dev) + " on 20 images, asymmetry " + fmt("%.3g", asym) +
              ", 2x2 Q " + fmt("%.3g", q) + " (hand 0)");
}

void ac6_ac7(const std::vector<fs::path>& paths, const fs::path& out_dir) {
  const std::vector<double> levels{0.05, 0.10, 0.20};
  const auto t0 = Clock::now();
  const auto report = tools::build_report(paths, levels, PipelineConfig{}, true, 0);
  const double secs = seconds_since(t0);

  std::printf("     %-12s %8s %8s %8s   %s\n", "image", "5%", "10%", "20%", "band 5/10/20%");
  int strict = 0;
  std::string not_strict;
  for (const auto& row : report.rows) {
    const double s0 = row.cells[0].methods[0].saving, s1 = row.cells[1].methods[0].saving,
                 s2 = row.cells[2].methods[0].saving;
    const bool ok = s0 < s1 && s1 < s2;
    strict += ok;
    if (!ok) not_strict += (not_strict.empty() ? "" : ",") + row.image;
    std::printf("     %-12s %7.2f%% %7.2f%% %7.2f%%   %.2f/%.2f/%.2f%%\n", row.image.c_str(), 100 * s0, 100 * s1,
                100 * s2, 100 * row.cells[0].methods[3].saving, 100 * row.cells[1].methods[3].saving,
                100 * row.cells[2].methods[3].saving);
  }
  const auto avg = report.average();
  std::printf("     %-12s %7.2f%% %7.2f%% %7.2f%%\n", "average", 100 * avg[0], 100 * avg[1], 100 * avg[2]);
  const std::size_t n = report.rows.size();
  const bool enough = n >= 10;
  const bool all_strict = strict == static_cast<int>(n);
  const bool band = avg[1] >= 0.30 && avg[1] <= 0.80;
  const bool ordered = avg[0] < avg[1] && avg[1] < avg[2];
  verdict(6, enough && all_strict && band && ordered && secs < 600.0, "savings trend over distortion levels",
          std::to_string(n) + " images; strictly increasing on " + std::to_string(strict) + "/" + std::to_string(n) +
              (not_strict.empty() ? "" : " (not: " + not_strict + ")") + "; average " + fmt("%.2f", 100 * avg[0]) +
              " / " + fmt("%.2f", 100 * avg[1]) + " / " + fmt("%.2f", 100 * avg[2]) + " %; " + fmt("%.0f", secs) +
              " s");

  nlohmann::ordered_json violations = nlohmann::ordered_json::array();
  bool pass7 = n > 0;
  std::string detail;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    int ok = 0;
    for (const auto& row : report.rows) {
      const auto& c = row.cells[l];
      if (!c.hebs_below_band) {
        ++ok;
      } else {
        auto v = hebs::to_json(c);
        v["image"] = row.image;
        violations.push_back(std::move(v));
      }
    }
    const double share = n ? static_cast<double>(ok) / n : 0.0;
    pass7 = pass7 && share >= 0.90;
    detail += (l ? ", " : "") + fmt("D_max %.2f: ", levels[l]) + std::to_string(ok) + "/" + std::to_string(n);
  }
  const auto vpath = out_dir / "acceptance_band_violations.json";
  std::ofstream(vpath, std::ios::trunc) << violations.dump(2) << "\n";
  verdict(7, pass7, "HEBS saving >= band baseline - 0.01 on >= 90% of images",
          detail + "; " + std::to_string(violations.size()) + " violations with plans in " + vpath.string());
}

void ac8() {
  const auto id = PiecewiseLinearCurve::identity();
  const std::vector<double> expected{0.25, 0.5, 0.75, 1.0};
  const bool quantized = ladder_from_curve(id, 1.0, 4).levels() == expected;
  const bool exact = ladder_from_curve(id, 1.0, 4, std::nullopt).levels() == expected;
  std::string got;
  for (double v : ladder_from_curve(id, 1.0, 4).levels()) got += fmt("%.17g ", v);
  verdict(8, quantized && exact, "default ladder levels", "levels " + got);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ac9(const std::vector<fs::path>& paths, const fs::path& out_dir) {
  std::vector<fs::path> subset(paths.begin(), paths.begin() + std::min<std::size_t>(3, paths.size()));
  bool same = !subset.empty();
  for (const auto& p : subset) {
    const auto img = load_image(p);
    same = same && to_json(run_hebs(img, 0.1)).dump() == to_json(run_hebs(img, 0.1)).dump();
  }
  const nlohmann::ordered_json run = {{"check", "determinism"}, {"version", HEBS_VERSION}};
  std::string first[2];
  for (int pass = 0; pass < 2; ++pass) {
    const auto report = tools::build_report(subset, {0.05, 0.1}, PipelineConfig{}, true, pass == 0 ? 0 : 1);
    const auto dir = out_dir / ("acceptance_determinism_" + std::to_string(pass));
    fs::create_directories(dir);
    tools::write_report_csv(report, dir / "report.csv", run);
    tools::write_report_markdown(report, dir / "report.md", run);
    first[pass] = slurp(dir / "report.csv") + slurp(dir / "report.md");
  }
  same = same && first[0] == first[1];
  verdict(9, same, "deterministic plans and reports",
          std::to_string(subset.size()) + " images; plan JSON and report files compared byte for byte");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HEBS acceptance checks"};
  std::string corpus_dir;
  std::string out_dir = ".";
  app.add_option("--corpus", corpus_dir, "Benchmark image directory")->required();
  app.add_option("--out", out_dir, "Where violation reports are written");
  CLI11_PARSE(app, argc, argv);

  std::vector<fs::path> paths;
  std::vector<Image> images;
  try {
    paths = tools::list_images({corpus_dir});
    for (const auto& p : paths) images.push_back(load_image(p));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "corpus: %s\n", e.what());
  }
  fs::create_directories(out_dir);

  ac1();
  ac2();
  ac3();
  ac4();
  ac5(images);
  ac6_ac7(paths, out_dir);
  ac8();
  ac9(paths, out_dir);

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
