#include "hebs/coarsen.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hebs {

namespace {

constexpr double kSlopeTolerance = 1e-12;

double lerp(const Vertex& a, const Vertex& b, double x) {
  if (x == a.x) return a.y;
  if (x == b.x) return b.y;
  return a.y + (b.y - a.y) * ((x - a.x) / (b.x - a.x));
}

// First grid level whose x lies strictly above `x`.
int first_level_above(double x) {
  int l = std::max(0, static_cast<int>(std::floor(x * kMaxCode)));
  while (l < kLevels && from_code(l) <= x) ++l;
  return l;
}

}  // namespace

PiecewiseLinearCurve::PiecewiseLinearCurve(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw Error("curve needs at least two vertices");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const auto& v = vertices_[i];
    if (!(v.x >= 0.0 && v.x <= 1.0 && v.y >= 0.0 && v.y <= 1.0)) throw Error("curve vertex outside [0, 1]^2");
    if (i > 0 && !(vertices_[i - 1].x < v.x)) throw Error("curve x must be strictly increasing");
  }
}

PiecewiseLinearCurve PiecewiseLinearCurve::identity() {
  return PiecewiseLinearCurve({{0.0, 0.0}, {1.0, 1.0}});
}

double PiecewiseLinearCurve::operator()(double x) const {
  if (!(x >= front().x && x <= back().x)) throw Error("curve evaluated outside its domain");
  auto it = std::upper_bound(vertices_.begin(), vertices_.end(), x,
                             [](double value, const Vertex& v) { return value < v.x; });
  if (it == vertices_.end()) return back().y;
  return lerp(*(it - 1), *it, x);
}

double PiecewiseLinearCurve::at_level(int level) const { return (*this)(from_code(level)); }

double PiecewiseLinearCurve::max_y() const {
  return std::max_element(vertices_.begin(), vertices_.end(),
                          [](const Vertex& a, const Vertex& b) { return a.y < b.y; })->y;
}

bool PiecewiseLinearCurve::is_monotone() const {
  return std::is_sorted(vertices_.begin(), vertices_.end(),
                        [](const Vertex& a, const Vertex& b) { return a.y < b.y; });
}

TransferTable PiecewiseLinearCurve::to_table() const {
  if (front().x != 0.0 || back().x != 1.0) throw Error("curve must span [0, 1] to form a table");
  TransferTable t;
  for (int k = 0; k < kLevels; ++k) t.values[k] = at_level(k);
  t.g_min = *std::min_element(t.values.begin(), t.values.end());
  t.g_max = *std::max_element(t.values.begin(), t.values.end());
  return t;
}

double eval_curve(const PiecewiseLinearCurve& curve, double x) { return curve(x); }

std::vector<Vertex> breakpoints(const TransferTable& table) {
  const auto& v = table.values;
  std::vector<Vertex> out{{from_code(0), v[0]}};
  for (int k = 1; k < kLevels - 1; ++k) {
    const double left = v[k] - v[k - 1];
    const double right = v[k + 1] - v[k];
    if (std::abs(right - left) > kSlopeTolerance) out.push_back({from_code(k), v[k]});
  }
  out.push_back({from_code(kLevels - 1), v[kLevels - 1]});
  return out;
}

double chord_error(const std::vector<Vertex>& points, std::size_t j, std::size_t i) {
  const Vertex& a = points[j];
  const Vertex& b = points[i];
  double sum = 0.0;
  std::size_t seg = j;
  for (int l = first_level_above(a.x); l < kLevels && from_code(l) < b.x; ++l) {
    const double x = from_code(l);
    while (points[seg + 1].x < x) ++seg;
    const double diff = lerp(points[seg], points[seg + 1], x) - lerp(a, b, x);
    sum += diff * diff;
  }
  return sum;
}

CoarsenResult coarsen(const std::vector<Vertex>& points, std::size_t m) {
  const std::size_t n = points.size();
  if (n < 2) throw Error("coarsen: need at least two points");
  if (m < 2) throw Error("coarsen: vertex budget must be >= 2");
  if (m > n) throw Error("coarsen: vertex budget exceeds point count");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(points[i - 1].x < points[i].x)) throw Error("coarsen: points must have increasing x");
  }

  std::vector<double> cost(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j + 1; i < n; ++i) cost[j * n + i] = chord_error(points, j, i);
  }

  // best[v][i]: least error of a v-vertex chain from points[0] ending at points[i].
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best(m + 1, std::vector<double>(n, kInf));
  std::vector<std::vector<std::size_t>> from(m + 1, std::vector<std::size_t>(n, 0));
  best[1][0] = 0.0;
  for (std::size_t v = 2; v <= m; ++v) {
    for (std::size_t i = v - 1; i < n; ++i) {
      for (std::size_t j = v - 2; j < i; ++j) {
        if (best[v - 1][j] == kInf) continue;
        const double candidate = best[v - 1][j] + cost[j * n + i];
        if (candidate < best[v][i]) {
          best[v][i] = candidate;
          from[v][i] = j;
        }
      }
    }
  }

  std::vector<Vertex> chosen(m);
  std::size_t at = n - 1;
  for (std::size_t v = m; v >= 1; --v) {
    chosen[v - 1] = points[at];
    at = from[v][at];
  }
  CoarsenResult result;
  result.curve = PiecewiseLinearCurve(std::move(chosen));
  result.mse = best[m][n - 1] / kLevels;
  result.n = n;
  result.m = m;
  return result;
}

}  // namespace hebs
