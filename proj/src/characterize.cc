#include "hebs/characterize.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace hebs {

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void check_range(double range) {
  if (!(range > 0.0 && range <= 1.0)) throw Error("dynamic range must lie in (0, 1]");
}

}  // namespace

RangeTransform transform_for_range(const Histogram& hist, double range, const TransformConfig& cfg) {
  check_range(range);
  if (cfg.vertices < 2) throw Error("vertex budget must be >= 2");
  RangeTransform t;
  t.phi = equalize(hist, 0.0, range, cfg.cdf_mode);
  const auto points = breakpoints(t.phi);
  t.lambda = coarsen(points, std::min(cfg.vertices, points.size()));
  t.lambda_table = t.lambda.curve.to_table();
  t.lambda_table.g_min = 0.0;
  t.lambda_table.g_max = range;
  t.lambda_table.cdf_mode = cfg.cdf_mode;
  return t;
}

double distortion_at_range(const Image& img, const Histogram& hist, const QualityReference& ref, double range,
                           const TransformConfig& cfg) {
  const auto t = transform_for_range(hist, range, cfg);
  return ref.distortion(apply_transfer(img, t.lambda_table));
}

std::vector<double> default_ranges() {
  std::vector<double> r;
  for (int i = 1; i <= 10; ++i) r.push_back(i / 10.0);
  return r;
}

std::vector<RangeSample> sweep(const Image& img, const std::vector<double>& ranges, const TransformConfig& cfg,
                               const QualityConfig& quality) {
  for (double r : ranges) check_range(r);
  const auto hist = histogram(img);
  const QualityReference ref(img, quality);
  std::vector<RangeSample> out;
  out.reserve(ranges.size());
  for (double r : ranges) out.push_back({r, distortion_at_range(img, hist, ref, r, cfg)});
  return out;
}

double DistortionCurve::average(double range) const {
  return avg_coeffs[0] + range * (avg_coeffs[1] + range * avg_coeffs[2]);
}

double DistortionCurve::worst(double range) const {
  if (ranges.empty()) throw Error("empty distortion curve");
  if (range <= ranges.front()) return worst_envelope.front();
  if (range >= ranges.back()) return worst_envelope.back();
  const auto it = std::upper_bound(ranges.begin(), ranges.end(), range);
  const auto i = static_cast<std::size_t>(it - ranges.begin());
  const double t = (range - ranges[i - 1]) / (ranges[i] - ranges[i - 1]);
  return worst_envelope[i - 1] + t * (worst_envelope[i] - worst_envelope[i - 1]);
}

double DistortionCurve::max_average_excess() const {
  double excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ranges.size(); ++i) excess = std::max(excess, average(ranges[i]) - worst_envelope[i]);
  return excess;
}

std::vector<double> monotone_upper_envelope(const std::vector<double>& values) {
  std::vector<double> out(values);
  for (std::size_t i = out.size(); i-- > 1;) out[i - 1] = std::max(out[i - 1], out[i]);
  return out;
}

std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  if (x.size() != y.size()) throw Error("polyfit: x and y differ in length");
  if (degree < 0 || x.size() < static_cast<std::size_t>(degree) + 1) throw Error("polyfit: not enough points");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(x.size()), degree + 1);
  Eigen::VectorXd b(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      a(static_cast<Eigen::Index>(i), d) = p;
      p *= x[i];
    }
    b(static_cast<Eigen::Index>(i)) = y[i];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  return {c.data(), c.data() + c.size()};
}

DistortionCurve fit(const std::vector<double>& ranges, std::vector<ImageSweep> sweeps, std::string corpus_id) {
  if (sweeps.size() < 2) throw Error("fit: need at least two images");
  if (ranges.size() < 3) throw Error("fit: need at least three ranges");
  if (!std::is_sorted(ranges.begin(), ranges.end()) ||
      std::adjacent_find(ranges.begin(), ranges.end()) != ranges.end()) {
    throw Error("fit: ranges must be strictly increasing");
  }
  std::vector<double> xs, ys;
  std::vector<double> per_range_max(ranges.size(), -std::numeric_limits<double>::infinity());
  for (const auto& s : sweeps) {
    if (s.distortion.size() != ranges.size()) throw Error("fit: sweep '" + s.name + "' has the wrong length");
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      xs.push_back(ranges[i]);
      ys.push_back(s.distortion[i]);
      per_range_max[i] = std::max(per_range_max[i], s.distortion[i]);
    }
  }
  DistortionCurve c;
  c.corpus_id = std::move(corpus_id);
  c.ranges = ranges;
  c.samples = std::move(sweeps);
  const auto coeffs = polyfit(xs, ys, 2);
  std::copy(coeffs.begin(), coeffs.end(), c.avg_coeffs.begin());
  c.worst_envelope = monotone_upper_envelope(per_range_max);
  return c;
}

RangeLookup min_range_from_curve(const DistortionCurve& curve, double d_max) {
  if (!(d_max >= 0.0 && d_max <= 1.0)) throw Error("d_max must lie in [0, 1]");
  const auto& r = curve.ranges;
  const auto& w = curve.worst_envelope;
  RangeLookup out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (w[i] > d_max) continue;
    if (i == 0) {
      out.range = r[0];
    } else {
      // w[i-1] > d_max >= w[i]: linear crossing inside the bracket.
      const double t = (w[i - 1] - d_max) / (w[i - 1] - w[i]);
      out.range = std::min(r[i], r[i - 1] + t * (r[i] - r[i - 1]));
    }
    out.distortion = curve.worst(out.range);
    return out;
  }
  out.range = 1.0;
  out.distortion = curve.worst(1.0);
  out.unreachable = true;
  return out;
}

RangeLookup min_range_by_bisection(const Image& img, const Histogram& hist, const QualityReference& ref,
                                   double d_max, const TransformConfig& cfg) {
  if (!(d_max >= 0.0 && d_max <= 1.0)) throw Error("d_max must lie in [0, 1]");
  RangeLookup out;
  auto eval = [&](int step) {
    ++out.evaluations;
    return distortion_at_range(img, hist, ref, static_cast<double>(step) / kRangeSteps, cfg);
  };
  // D(R) is not monotone (full-range equalization distorts too), so the
  // bracket comes from the first admissible point of a coarse scan.
  int lo = 0;
  int hi = -1;
  double d_hi = 0.0;
  double d_full = 0.0;
  for (int step = kCoarseStride; step <= kRangeSteps; step += kCoarseStride) {
    const double d = eval(step);
    if (step == kRangeSteps) d_full = d;
    if (d <= d_max) {
      hi = step;
      d_hi = d;
      break;
    }
    lo = step;
  }
  if (hi < 0) {
    out.range = 1.0;
    out.distortion = d_full;
    out.unreachable = true;
    return out;
  }
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    const double d = eval(mid);
    if (d <= d_max) {
      hi = mid;
      d_hi = d;
    } else {
      lo = mid;
    }
  }
  out.range = static_cast<double>(hi) / kRangeSteps;
  out.distortion = d_hi;
  return out;
}

RangeLookup min_range_by_bisection(const Image& img, double d_max, const TransformConfig& cfg,
                                   const QualityConfig& quality) {
  return min_range_by_bisection(img, histogram(img), QualityReference(img, quality), d_max, cfg);
}

void write_curve_csv(const DistortionCurve& curve, const std::filesystem::path& path, const std::string& comment) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "R,D_avg,D_worst\n";
  for (std::size_t i = 0; i < curve.ranges.size(); ++i) {
    out << format_number(curve.ranges[i]) << ',' << format_number(curve.average(curve.ranges[i])) << ','
        << format_number(curve.worst_envelope[i]) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

nlohmann::ordered_json curve_to_json(const DistortionCurve& curve) {
  nlohmann::ordered_json j;
  j["corpus_id"] = curve.corpus_id;
  j["ranges"] = curve.ranges;
  j["avg_fit"] = {{"family", "quadratic"},
                  {"c0", curve.avg_coeffs[0]},
                  {"c1", curve.avg_coeffs[1]},
                  {"c2", curve.avg_coeffs[2]}};
  j["worst_envelope"] = curve.worst_envelope;
  auto samples = nlohmann::ordered_json::array();
  for (const auto& s : curve.samples) samples.push_back({{"image", s.name}, {"distortion", s.distortion}});
  j["samples"] = std::move(samples);
  return j;
}

DistortionCurve curve_from_json(const nlohmann::json& j) {
  try {
    DistortionCurve c;
    c.corpus_id = j.value("corpus_id", "");
    c.ranges = j.at("ranges").get<std::vector<double>>();
    c.worst_envelope = j.at("worst_envelope").get<std::vector<double>>();
    const auto& f = j.at("avg_fit");
    c.avg_coeffs = {f.at("c0").get<double>(), f.at("c1").get<double>(), f.at("c2").get<double>()};
    if (auto s = j.find("samples"); s != j.end()) {
      for (const auto& e : *s) {
        c.samples.push_back({e.at("image").get<std::string>(), e.at("distortion").get<std::vector<double>>()});
      }
    }
    if (c.ranges.empty() || c.ranges.size() != c.worst_envelope.size()) throw FormatError("curve: malformed ranges");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("curve: ") + e.what());
  }
}

void write_curve_json(const DistortionCurve& curve, const std::filesystem::path& path,
                      const nlohmann::ordered_json& metadata) {
  auto j = curve_to_json(curve);
  if (!metadata.is_null()) j["run"] = metadata;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

DistortionCurve load_curve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open curve file " + path.string());
  if (path.extension() == ".json") {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("curve: " + std::string(e.what()));
    }
    return curve_from_json(j);
  }
  DistortionCurve c;
  std::vector<double> avg;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("R,D_avg,D_worst", 0) != 0) throw FormatError("curve csv: unexpected header");
      header = true;
      continue;
    }
    std::istringstream row(line);
    std::string f0, f1, f2;
    if (!std::getline(row, f0, ',') || !std::getline(row, f1, ',') || !std::getline(row, f2)) {
      throw FormatError("curve csv: malformed row");
    }
    try {
      c.ranges.push_back(std::stod(f0));
      avg.push_back(std::stod(f1));
      c.worst_envelope.push_back(std::stod(f2));
    } catch (const std::exception&) {
      throw FormatError("curve csv: malformed number");
    }
  }
  if (c.ranges.empty()) throw FormatError("curve csv: no rows");
  if (c.ranges.size() >= 3) {
    const auto coeffs = polyfit(c.ranges, avg, 2);
    std::copy(coeffs.begin(), coeffs.end(), c.avg_coeffs.begin());
  }
  return c;
}

}  // namespace hebs
