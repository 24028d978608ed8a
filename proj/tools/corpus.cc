#include "corpus.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

namespace hebs::tools {

namespace fs = std::filesystem;

namespace {

bool is_image(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".pgm";
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void check_written(const std::ofstream& out, const fs::path& path) {
  if (!out) throw IoError("write failed for " + path.string());
}

std::string level_tag(double level) { return format_fixed(level, 2); }

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<fs::path> list_images(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && is_image(e.path())) out.push_back(e.path());
      }
    } else if (fs::exists(in)) {
      out.push_back(in);
    } else {
      throw IoError("no such file or directory: " + in.string());
    }
  }
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename() != b.filename() ? a.filename() < b.filename() : a < b;
  });
  return out;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<double> Report::average() const { return average(0); }

std::vector<double> Report::average(std::size_t method) const {
  std::vector<double> out(levels.size(), 0.0);
  if (rows.empty()) return out;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    double sum = 0.0;
    for (const auto& r : rows) sum += r.cells[l].methods.at(method).saving;
    out[l] = sum / static_cast<double>(rows.size());
  }
  return out;
}

Report build_report(const std::vector<fs::path>& images, const std::vector<double>& levels,
                    const PipelineConfig& cfg, bool compare, unsigned threads) {
  Report report;
  report.levels = levels;
  report.compare = compare;
  report.rows.resize(images.size());
  parallel_for(images.size(), threads, [&](std::size_t i) {
    const auto img = load_image(images[i]);
    auto& row = report.rows[i];
    row.image = images[i].stem().string();
    for (double level : levels) {
      if (compare) {
        row.cells.push_back(hebs::compare(img, level, cfg));
      } else {
        Comparison c;
        c.d_max = level;
        c.hebs = run_hebs(img, level, cfg);
        c.methods.push_back({"hebs", c.hebs.beta, c.hebs.achieved_distortion, c.hebs.power.saving_fraction,
                             c.hebs.identity});
        row.cells.push_back(std::move(c));
      }
    }
  });
  return report;
}

void write_report_csv(const Report& report, const fs::path& path, const nlohmann::ordered_json& run) {
  auto out = open_out(path);
  out << "# " << run.dump() << "\n";
  const std::size_t methods = report.compare ? 4 : 1;
  const char* names[] = {"hebs", "brightness", "contrast", "band"};
  out << "image";
  for (std::size_t m = 0; m < methods; ++m) {
    for (double level : report.levels) out << ",saving_" << names[m] << "_d" << level_tag(level);
  }
  for (double level : report.levels) out << ",beta_hebs_d" << level_tag(level);
  out << "\n";
  for (const auto& row : report.rows) {
    out << row.image;
    for (std::size_t m = 0; m < methods; ++m) {
      for (const auto& c : row.cells) out << ',' << format_fixed(c.methods[m].saving, 9);
    }
    for (const auto& c : row.cells) out << ',' << format_fixed(c.hebs.beta, 9);
    out << "\n";
  }
  out << "average";
  for (std::size_t m = 0; m < methods; ++m) {
    for (double v : report.average(m)) out << ',' << format_fixed(v, 9);
  }
  for (std::size_t l = 0; l < report.levels.size(); ++l) {
    double sum = 0.0;
    for (const auto& row : report.rows) sum += row.cells[l].hebs.beta;
    out << ',' << format_fixed(report.rows.empty() ? 0.0 : sum / report.rows.size(), 9);
  }
  out << "\n";
  check_written(out, path);
}

void write_report_markdown(const Report& report, const fs::path& path, const nlohmann::ordered_json& run) {
  auto out = open_out(path);
  out << "# Power saving per distortion level\n\n";
  out << "Run configuration:\n\n```json\n" << run.dump(2) << "\n```\n\n";
  out << "| Image |";
  for (double level : report.levels) out << " D_max " << format_fixed(100.0 * level, 0) << "% |";
  out << "\n|---|";
  for (std::size_t l = 0; l < report.levels.size(); ++l) out << "---:|";
  out << "\n";
  auto pct = [](double v) { return format_fixed(100.0 * v, 2); };
  for (const auto& row : report.rows) {
    out << "| " << row.image << " |";
    for (const auto& c : row.cells) out << ' ' << pct(c.methods[0].saving) << (c.hebs.identity ? "*" : "") << " |";
    out << "\n";
  }
  out << "| **average** |";
  for (double v : report.average()) out << " **" << pct(v) << "** |";
  out << "\n\nSavings in percent of full-backlight power. `*` marks an identity plan (budget unreachable).\n";

  if (report.compare) {
    out << "\n## Method comparison\n\n| Image | D_max | HEBS | brightness | contrast | band | HEBS - band |\n"
           "|---|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& row : report.rows) {
      for (const auto& c : row.cells) {
        out << "| " << row.image << " | " << pct(c.d_max) << "% |";
        for (const auto& m : c.methods) out << ' ' << pct(m.saving) << " |";
        out << ' ' << pct(c.methods[0].saving - c.methods[3].saving) << (c.hebs_below_band ? " !" : "") << " |\n";
      }
    }
    out << "\n`!` marks HEBS falling more than " << pct(kBandComparisonTolerance)
        << " points below the band baseline.\n";
  }
  check_written(out, path);
}

void write_svg_plot(const fs::path& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<Series>& series,
                    const nlohmann::ordered_json& run) {
  constexpr double kW = 720, kH = 440, kL = 70, kR = 170, kT = 40, kB = 60;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = 0.0, y1 = -x0;
  for (const auto& s : series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (!(x1 > x0)) x0 = 0.0, x1 = 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  auto px = [&](double x) { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); };
  auto py = [&](double y) { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); };
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                 "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  auto out = open_out(path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!-- " << xml_escape(run.dump()) << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(title)
      << "</text>\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << py(y0) << "\" x2=\"" << kW - kR << "\" y2=\"" << py(y0)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5, yv = y0 + (y1 - y0) * i / 5;
    out << "<text x=\"" << px(xv) << "\" y=\"" << kH - kB + 16 << "\" text-anchor=\"middle\">"
        << format_fixed(xv, 2) << "</text>\n";
    out << "<text x=\"" << kL - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << format_fixed(yv, 2)
        << "</text>\n";
    out << "<line x1=\"" << kL << "\" y1=\"" << py(yv) << "\" x2=\"" << kW - kR << "\" y2=\"" << py(yv)
        << "\" stroke=\"#ddd\"/>\n";
  }
  out << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 18 << "\" text-anchor=\"middle\">"
      << xml_escape(x_label) << "</text>\n";
  out << "<text transform=\"translate(18," << (kT + kH - kB) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << xml_escape(y_label) << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = colors[i % std::size(colors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      out << (k ? " " : "") << format_fixed(px(s.x[k]), 2) << ',' << format_fixed(py(s.y[k]), 2);
    }
    out << "\"/>\n";
    const double ly = kT + 16.0 * i;
    out << "<line x1=\"" << kW - kR + 12 << "\" y1=\"" << ly << "\" x2=\"" << kW - kR + 32 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kW - kR + 36 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
  check_written(out, path);
}

}  // namespace hebs::tools
