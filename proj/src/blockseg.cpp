#include "mroi/blockseg.hpp"

#include <algorithm>
#include <string>

#include "mroi/errors.hpp"

namespace mroi {

namespace {

void check_params(const BlockSegParams& p) {
  if (p.block_size < 1) throw Error(ErrorCode::config, "block_size must be >= 1, got " + std::to_string(p.block_size));
  if (p.zero_thresh < 0) throw Error(ErrorCode::config, "zero_thresh must be >= 0");
}

}  // namespace

std::vector<Rect> iterate_blocks(int width, int height, int block_size) {
  if (block_size < 1) throw Error(ErrorCode::config, "block_size must be >= 1, got " + std::to_string(block_size));
  std::vector<Rect> blocks;
  for (int y = 0; y < height; y += block_size) {
    const int h = std::min(block_size, height - y);
    for (int x = 0; x < width; x += block_size) {
      blocks.push_back(Rect{x, y, std::min(block_size, width - x), h});
    }
  }
  return blocks;
}

std::vector<BlockStats> block_stats(const ChannelPlane& plane, int block_size) {
  if (block_size < 1) throw Error(ErrorCode::config, "block_size must be >= 1, got " + std::to_string(block_size));
  const int w = plane.width();
  const int h = plane.height();
  const int nbx = (w + block_size - 1) / block_size;
  std::vector<BlockStats> out;
  out.reserve(static_cast<std::size_t>(nbx) * ((h + block_size - 1) / block_size));

  std::vector<int> counts(static_cast<std::size_t>(nbx));
  const auto s = plane.samples();
  for (int by = 0; by < h; by += block_size) {
    const int bh = std::min(block_size, h - by);
    std::fill(counts.begin(), counts.end(), 0);
    for (int y = by; y < by + bh; ++y) {
      const std::uint8_t* row = s.data() + static_cast<std::size_t>(y) * w;
      int bx = 0;
      for (int x0 = 0; x0 < w; x0 += block_size, ++bx) {
        const int x1 = std::min(x0 + block_size, w);
        int zeros = 0;
        for (int x = x0; x < x1; ++x) zeros += row[x] == 0;
        counts[static_cast<std::size_t>(bx)] += zeros;
      }
    }
    int bx = 0;
    for (int x0 = 0; x0 < w; x0 += block_size, ++bx) {
      out.push_back(BlockStats{Rect{x0, by, std::min(block_size, w - x0), bh}, counts[static_cast<std::size_t>(bx)]});
    }
  }
  return out;
}

bool block_is_background(const BlockStats& stats, const BlockSegParams& params) {
  if (params.mode == ZeroThreshMode::absolute) return stats.zero_count > params.zero_thresh;
  // count > thresh * area / bs², kept in integers.
  const long long full = static_cast<long long>(params.block_size) * params.block_size;
  return static_cast<long long>(stats.zero_count) * full > static_cast<long long>(params.zero_thresh) * stats.rect.area();
}

BinaryMask segment_layer(const ChannelPlane& layer, const BlockSegParams& params) {
  check_params(params);
  BinaryMask mask(layer.width(), layer.height());
  for (const BlockStats& b : block_stats(layer, params.block_size)) {
    if (!block_is_background(b, params)) mask.fill(b.rect, true);
  }
  return mask;
}

}  // namespace mroi
