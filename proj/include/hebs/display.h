#pragma once

#include <optional>
#include <vector>

#include "hebs/coarsen.h"
#include "hebs/image.h"

namespace hebs {

/// One reference voltage of the grayscale ladder: the input level it is
/// attached to and its voltage as a fraction of V_dd.
struct LadderTap {
  double x = 0.0;
  double level = 0.0;
};

/// Reference-voltage ladder of `k` controllable sources above a bottom
/// reference. taps()[0] is the bottom reference, taps()[1..k] the sources.
class VoltageLadder {
 public:
  VoltageLadder(std::vector<LadderTap> taps, std::optional<int> dac_bits);

  int sources() const { return static_cast<int>(taps_.size()) - 1; }
  const std::vector<LadderTap>& taps() const { return taps_; }
  /// The k source voltages, bottom reference excluded.
  std::vector<double> levels() const;
  std::optional<int> dac_bits() const { return dac_bits_; }

  /// Transmissivity produced for input x by interpolating between taps.
  double transmissivity(double x) const;

 private:
  std::vector<LadderTap> taps_;
  std::optional<int> dac_bits_;
};

/// Nearest multiple of 2^-bits, clamped to [0, 1].
double quantize_level(double v, int bits);

/// Reference voltages V_i = Y_i / beta realizing `curve` on a ladder of
/// `sources` taps. Curves with fewer than sources + 1 vertices get extra taps
/// by bisecting their widest segment (leftmost on ties); those taps lie on
/// the curve so the realized transfer function is unchanged. `dac_bits` of
/// nullopt leaves levels unquantized.
VoltageLadder ladder_from_curve(const PiecewiseLinearCurve& curve, double beta, int sources,
                                std::optional<int> dac_bits = 10);

struct DisplayFrame {
  Image luminance;                      ///< beta * transmissivity, per channel sample
  std::vector<double> transmissivity;   ///< per channel sample
  double beta = 1.0;
  double quantization_error_max = 0.0;  ///< max |luminance - curve(x)|
};

DisplayFrame render(const Image& img, const PiecewiseLinearCurve& curve, double beta,
                    const VoltageLadder& ladder);

}  // namespace hebs
