#pragma once

// Raster data model shared by every pipeline stage: interleaved 8-bit
// images, single-channel planes, and {0,255} binary masks. All types are
// value types; copies are deep and independent.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mroi {

/// Axis-aligned rectangle, half-open: covers [x, x+width) × [y, y+height).
struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  int right() const { return x + width; }
  int bottom() const { return y + height; }
  long long area() const { return static_cast<long long>(width) * height; }
  bool empty() const { return width <= 0 || height <= 0; }
  bool contains(int px, int py) const {
    return px >= x && px < right() && py >= y && py < bottom();
  }
  bool within(int w, int h) const {
    return x >= 0 && y >= 0 && width >= 0 && height >= 0 && right() <= w && bottom() <= h;
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

Rect intersection(const Rect& a, const Rect& b);
double iou(const Rect& a, const Rect& b);

/// 8-bit image with 1 or 3 interleaved channels, row-major.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, int channels, std::uint8_t fill = 0);
  RasterImage(int width, int height, int channels, std::vector<std::uint8_t> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return samples_.empty(); }

  std::uint8_t at(int x, int y, int c = 0) const { return samples_[index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c = 0) { return samples_[index(x, y, c)]; }

  std::span<const std::uint8_t> samples() const { return samples_; }
  std::span<std::uint8_t> samples() { return samples_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> samples_;
};

/// One channel of an image, row-major.
class ChannelPlane {
 public:
  ChannelPlane() = default;
  ChannelPlane(int width, int height, std::uint8_t fill = 0);
  ChannelPlane(int width, int height, std::vector<std::uint8_t> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return samples_.empty(); }

  std::uint8_t operator()(int x, int y) const { return samples_[index(x, y)]; }
  std::uint8_t& operator()(int x, int y) { return samples_[index(x, y)]; }

  std::span<const std::uint8_t> samples() const { return samples_; }
  std::span<std::uint8_t> samples() { return samples_; }

  friend bool operator==(const ChannelPlane&, const ChannelPlane&) = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> samples_;
};

/// Foreground (255) / background (0) grid. Only the two legal values are
/// ever stored.
class BinaryMask {
 public:
  static constexpr std::uint8_t kForeground = 255;
  static constexpr std::uint8_t kBackground = 0;

  BinaryMask() = default;
  BinaryMask(int width, int height, bool foreground = false);

  /// Throws ErrorCode::malformed if any sample is not 0 or 255.
  static BinaryMask from_samples(int width, int height, std::vector<std::uint8_t> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return samples_.empty(); }

  bool test(int x, int y) const { return samples_[index(x, y)] != kBackground; }
  void set(int x, int y, bool foreground) {
    samples_[index(x, y)] = foreground ? kForeground : kBackground;
  }
  void fill(const Rect& r, bool foreground);

  std::size_t count() const;
  std::span<const std::uint8_t> samples() const { return samples_; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> samples_;
};

/// 2|A∩B| / (|A|+|B|); 1.0 when both masks are empty.
double dice(const BinaryMask& a, const BinaryMask& b);

ChannelPlane to_plane(const BinaryMask& mask);

}  // namespace mroi
