#pragma once

#include <cstddef>
#include <vector>

#include "hebs/equalize.h"

namespace hebs {

/// A vertex of a piecewise-linear transfer curve. Breakpoints of a
/// TransferTable sit on the level grid x = k / 255.
struct Vertex {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vertex&) const = default;
};

/// Ordered vertex list; x strictly increasing, linear in between.
class PiecewiseLinearCurve {
 public:
  PiecewiseLinearCurve() = default;
  explicit PiecewiseLinearCurve(std::vector<Vertex> vertices);

  static PiecewiseLinearCurve identity();

  const std::vector<Vertex>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Vertex& front() const { return vertices_.front(); }
  const Vertex& back() const { return vertices_.back(); }

  /// Linear interpolation on x in [front().x(), back().x()].
  double operator()(double x) const;
  /// Value at an 8-bit level; exact at vertices.
  double at_level(int level) const;
  double max_y() const;
  bool is_monotone() const;

  TransferTable to_table() const;

 private:
  std::vector<Vertex> vertices_;
};

double eval_curve(const PiecewiseLinearCurve& curve, double x);

/// Minimal vertex set of the table seen as a piecewise-linear function over
/// the 256 levels: the first and last level plus every slope change.
std::vector<Vertex> breakpoints(const TransferTable& table);

struct CoarsenResult {
  PiecewiseLinearCurve curve;
  double mse = 0.0;  ///< mean over all 256 levels of (Phi - Lambda)^2
  std::size_t n = 0;
  std::size_t m = 0;
};

/// Optimal m-vertex subset of `points` (endpoints fixed) minimizing the
/// squared error against the source curve summed over every level it spans.
/// O(m n^2) after an O(n^2 * span) segment-cost table.
CoarsenResult coarsen(const std::vector<Vertex>& points, std::size_t m);

/// Squared error summed over the grid levels strictly between points[j] and
/// points[i] when the source curve through `points` is replaced by one chord.
double chord_error(const std::vector<Vertex>& points, std::size_t j, std::size_t i);

}  // namespace hebs
