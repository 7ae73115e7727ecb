#pragma once

// Block zero-count segmentation: a layer plane is tiled into fixed-size
// blocks (clamped at the right and bottom borders) and each block becomes
// entirely background when it holds more than `zero_thresh` zero pixels,
// entirely foreground otherwise.

#include <vector>

#include "mroi/layers.hpp"
#include "mroi/raster.hpp"

namespace mroi {

enum class ZeroThreshMode {
  absolute,  // zero_thresh is compared as-is, whatever the block area
  fraction,  // zero_thresh is scaled by area / block_size² for clamped blocks
};

struct BlockSegParams {
  int block_size = 10;
  int zero_thresh = 50;
  ZeroThreshMode mode = ZeroThreshMode::absolute;
};

struct BlockStats {
  Rect rect;
  int zero_count = 0;
};

/// Row-major block rectangles covering a width × height plane.
std::vector<Rect> iterate_blocks(int width, int height, int block_size);

/// Zero counts per block, in iterate_blocks order.
std::vector<BlockStats> block_stats(const ChannelPlane& plane, int block_size);

/// True when a block with this zero count and rectangle is background.
bool block_is_background(const BlockStats& stats, const BlockSegParams& params);

BinaryMask segment_layer(const ChannelPlane& layer, const BlockSegParams& params);
inline BinaryMask segment_layer(const LayerPlane& layer, const BlockSegParams& params) {
  return segment_layer(layer.plane, params);
}

}  // namespace mroi
