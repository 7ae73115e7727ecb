#include "mroi/raster.hpp"

#include <algorithm>
#include <string>

#include "mroi/errors.hpp"

namespace mroi {

namespace {

void check_extent(int width, int height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::malformed, "negative raster extent");
  }
}

std::size_t sample_count(int width, int height, int channels) {
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
         static_cast<std::size_t>(channels);
}

}  // namespace

Rect intersection(const Rect& a, const Rect& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return Rect{x0, y0, 0, 0};
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

double iou(const Rect& a, const Rect& b) {
  const long long inter = intersection(a, b).area();
  const long long uni = a.area() + b.area() - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

RasterImage::RasterImage(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  check_extent(width, height);
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::malformed, "channel count must be 1 or 3, got " + std::to_string(channels));
  }
  samples_.assign(sample_count(width, height, channels), fill);
}

RasterImage::RasterImage(int width, int height, int channels, std::vector<std::uint8_t> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
  check_extent(width, height);
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::malformed, "channel count must be 1 or 3, got " + std::to_string(channels));
  }
  if (samples_.size() != sample_count(width, height, channels)) {
    throw Error(ErrorCode::malformed, "sample buffer does not match width*height*channels");
  }
}

ChannelPlane::ChannelPlane(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  check_extent(width, height);
  samples_.assign(sample_count(width, height, 1), fill);
}

ChannelPlane::ChannelPlane(int width, int height, std::vector<std::uint8_t> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  check_extent(width, height);
  if (samples_.size() != sample_count(width, height, 1)) {
    throw Error(ErrorCode::malformed, "sample buffer does not match width*height");
  }
}

BinaryMask::BinaryMask(int width, int height, bool foreground) : width_(width), height_(height) {
  check_extent(width, height);
  samples_.assign(sample_count(width, height, 1), foreground ? kForeground : kBackground);
}

BinaryMask BinaryMask::from_samples(int width, int height, std::vector<std::uint8_t> samples) {
  check_extent(width, height);
  if (samples.size() != sample_count(width, height, 1)) {
    throw Error(ErrorCode::malformed, "mask buffer does not match width*height");
  }
  for (std::uint8_t s : samples) {
    if (s != kForeground && s != kBackground) {
      throw Error(ErrorCode::malformed, "mask sample " + std::to_string(s) + " is neither 0 nor 255");
    }
  }
  BinaryMask m;
  m.width_ = width;
  m.height_ = height;
  m.samples_ = std::move(samples);
  return m;
}

void BinaryMask::fill(const Rect& r, bool foreground) {
  const std::uint8_t v = foreground ? kForeground : kBackground;
  for (int y = r.y; y < r.bottom(); ++y) {
    std::fill_n(samples_.begin() + static_cast<std::ptrdiff_t>(index(r.x, y)), r.width, v);
  }
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(samples_.begin(), samples_.end(), kForeground));
}

double dice(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::dimension_mismatch, "dice operands differ in size");
  }
  std::size_t both = 0;
  const auto sa = a.samples();
  const auto sb = b.samples();
  for (std::size_t i = 0; i < sa.size(); ++i) {
    both += (sa[i] & sb[i]) ? 1 : 0;
  }
  const std::size_t total = a.count() + b.count();
  return total == 0 ? 1.0 : 2.0 * static_cast<double>(both) / static_cast<double>(total);
}

ChannelPlane to_plane(const BinaryMask& mask) {
  const auto s = mask.samples();
  return ChannelPlane(mask.width(), mask.height(), std::vector<std::uint8_t>(s.begin(), s.end()));
}

}  // namespace mroi
