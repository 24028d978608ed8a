#include "hebs/image.h"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string_view>

namespace hebs {

namespace {

constexpr double kRec601R = 0.299;
constexpr double kRec601G = 0.587;
constexpr double kRec601B = 0.114;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

// Minimal tokenizer for the PGM header: whitespace separated, '#' comments.
class PgmHeader {
 public:
  explicit PgmHeader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) throw FormatError("PGM: malformed header");
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > (1 << 24)) throw FormatError("PGM: header value too large");
    }
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) throw FormatError("PGM: truncated header");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

bool is_png(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

Image decode_png(std::span<const std::uint8_t> bytes, LumaPolicy policy) {
  // IHDR is always the first chunk: signature(8) length(4) type(4) w h depth colortype
  if (bytes.size() < 33 || std::memcmp(bytes.data() + 12, "IHDR", 4) != 0) {
    throw FormatError("PNG: truncated or missing IHDR");
  }
  const int bit_depth = bytes[24];
  const int color_type = bytes[25];
  if (bit_depth != 8) throw FormatError("PNG: bit depth " + std::to_string(bit_depth) + " unsupported (need 8)");
  int channels = 0;
  switch (color_type) {
    case PNG_COLOR_TYPE_GRAY: channels = 1; break;
    case PNG_COLOR_TYPE_RGB:
    case PNG_COLOR_TYPE_PALETTE: channels = 3; break;
    default: throw FormatError("PNG: alpha channels are unsupported");
  }
  if (channels == 3 && policy == LumaPolicy::kGrayscaleOnly) {
    throw FormatError("PNG: colour input under grayscale-only policy");
  }

  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw FormatError(std::string("PNG: ") + png.message);
  }
  png.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  std::vector<std::uint8_t> raster(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, raster.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw FormatError("PNG: " + msg);
  }
  return Image::from_codes(static_cast<int>(png.width), static_cast<int>(png.height), channels, raster);
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width());
  png.height = static_cast<png_uint_32>(img.height());
  png.format = img.channels() == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  const auto raster = img.codes();
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, raster.data(), 0, nullptr)) {
    throw FormatError(std::string("PNG encode: ") + png.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, raster.data(), 0, nullptr)) {
    throw FormatError(std::string("PNG encode: ") + png.message);
  }
  out.resize(size);
  return out;
}

std::string lower_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

std::uint8_t to_code(double s) {
  const double scaled = std::floor(std::clamp(s, 0.0, 1.0) * kMaxCode + 0.5);
  return static_cast<std::uint8_t>(scaled);
}

Image::Image(int width, int height, int channels, std::vector<double> samples, int source_depth)
    : width_(width), height_(height), channels_(channels), source_depth_(source_depth),
      samples_(std::move(samples)) {
  if (width <= 0 || height <= 0) throw Error("image dimensions must be positive");
  if (channels != 1 && channels != 3) throw Error("image must have 1 or 3 channels");
  if (samples_.size() != pixel_count() * channels) throw Error("sample count does not match dimensions");
  for (double s : samples_) {
    if (!(s >= 0.0 && s <= 1.0)) throw Error("sample outside [0, 1]");
  }
  if (channels_ == 3) {
    luma_.resize(pixel_count());
    for (std::size_t i = 0; i < luma_.size(); ++i) {
      const double* rgb = &samples_[i * 3];
      luma_[i] = std::min(1.0, kRec601R * rgb[0] + kRec601G * rgb[1] + kRec601B * rgb[2]);
    }
  }
}

Image Image::gray(int width, int height, std::vector<double> samples) {
  return Image(width, height, 1, std::move(samples));
}

Image Image::from_codes(int width, int height, int channels, std::span<const std::uint8_t> codes) {
  std::vector<double> samples(codes.size());
  std::transform(codes.begin(), codes.end(), samples.begin(), [](std::uint8_t c) { return from_code(c); });
  return Image(width, height, channels, std::move(samples));
}

std::vector<std::uint8_t> Image::codes() const {
  std::vector<std::uint8_t> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(), to_code);
  return out;
}

std::vector<std::uint8_t> Image::luminance_codes() const {
  const auto luma = luminance();
  std::vector<std::uint8_t> out(luma.size());
  std::transform(luma.begin(), luma.end(), out.begin(), to_code);
  return out;
}

std::array<std::uint64_t, kLevels> Histogram::cumulative() const {
  std::array<std::uint64_t, kLevels> cum{};
  std::uint64_t running = 0;
  for (int k = 0; k < kLevels; ++k) {
    running += counts[k];
    cum[k] = running;
  }
  return cum;
}

int Histogram::lowest_populated() const {
  for (int k = 0; k < kLevels; ++k) {
    if (counts[k] != 0) return k;
  }
  return -1;
}

int Histogram::highest_populated() const {
  for (int k = kLevels - 1; k >= 0; --k) {
    if (counts[k] != 0) return k;
  }
  return -1;
}

int Histogram::populated_levels() const {
  return static_cast<int>(std::count_if(counts.begin(), counts.end(), [](auto c) { return c != 0; }));
}

Image decode_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw FormatError("not a binary PGM (P5)");
  PgmHeader header(bytes);
  const int width = header.next_int();
  const int height = header.next_int();
  const int maxval = header.next_int();
  if (width <= 0 || height <= 0) throw FormatError("PGM: empty image");
  if (maxval != 255) throw FormatError("PGM: maxval " + std::to_string(maxval) + " unsupported (need 255)");
  const std::size_t offset = header.raster_offset();
  const std::size_t needed = static_cast<std::size_t>(width) * height;
  if (bytes.size() < offset + needed) throw FormatError("PGM: truncated raster");
  return Image::from_codes(width, height, 1, bytes.subspan(offset, needed));
}

std::vector<std::uint8_t> encode_pgm(const Image& img) {
  if (img.channels() != 1) throw FormatError("PGM output requires a single-channel image");
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto raster = img.codes();
  out.insert(out.end(), raster.begin(), raster.end());
  return out;
}

Image load_image(const std::filesystem::path& path, LumaPolicy policy) {
  const auto bytes = read_file(path);
  if (is_png(bytes)) return decode_png(bytes, policy);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm(bytes);
  throw FormatError(path.string() + ": unsupported format (need PGM P5 or PNG)");
}

void save_image(const Image& img, const std::filesystem::path& path) {
  const auto ext = lower_extension(path);
  if (ext == ".png") {
    write_file(path, encode_png(img));
  } else if (ext == ".pgm" || ext.empty()) {
    write_file(path, encode_pgm(img));
  } else {
    throw FormatError(path.string() + ": unsupported output extension");
  }
}

Histogram histogram(const Image& img) {
  Histogram h;
  for (std::uint8_t code : img.luminance_codes()) ++h.counts[code];
  h.total = img.pixel_count();
  return h;
}

}  // namespace hebs
