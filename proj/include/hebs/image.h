#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hebs {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed, truncated or unsupported image file.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kLevels = 256;
inline constexpr double kMaxCode = 255.0;

/// Normalized value -> 8-bit code, round-half-up of s*255.
std::uint8_t to_code(double s);
inline double from_code(int code) { return code / kMaxCode; }

enum class LumaPolicy { kGrayscaleOnly, kRec601 };

/// A 2-D grid of samples normalized to [0, 1].
///
/// Samples are interleaved when channels == 3. A luminance plane is kept for
/// every image: for single-channel images it is the samples themselves, for
/// RGB images it is the Rec.601 weighted sum 0.299R + 0.587G + 0.114B.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, std::vector<double> samples, int source_depth = 8);

  static Image gray(int width, int height, std::vector<double> samples);
  static Image from_codes(int width, int height, int channels, std::span<const std::uint8_t> codes);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  int source_depth() const { return source_depth_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  std::span<const double> samples() const { return samples_; }
  std::span<const double> luminance() const {
    return channels_ == 1 ? std::span<const double>(samples_) : std::span<const double>(luma_);
  }
  double at(int x, int y, int c = 0) const {
    return samples_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  /// Samples quantized back to 8-bit codes.
  std::vector<std::uint8_t> codes() const;
  /// Luminance plane quantized to 8-bit codes; this is what histograms count.
  std::vector<std::uint8_t> luminance_codes() const;

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  int source_depth_ = 8;
  std::vector<double> samples_;
  std::vector<double> luma_;
};

/// 256-bucket marginal histogram of 8-bit luminance codes.
struct Histogram {
  std::array<std::uint64_t, kLevels> counts{};
  std::uint64_t total = 0;

  static double bucket_center(int k) { return from_code(k); }
  /// Inclusive cumulative counts H(x_k).
  std::array<std::uint64_t, kLevels> cumulative() const;
  int lowest_populated() const;
  int highest_populated() const;
  int populated_levels() const;
};

Image load_image(const std::filesystem::path& path, LumaPolicy policy = LumaPolicy::kRec601);
void save_image(const Image& img, const std::filesystem::path& path);

/// PGM P5 encode/decode on memory buffers; used by load_image/save_image.
Image decode_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pgm(const Image& img);

Histogram histogram(const Image& img);

}  // namespace hebs
