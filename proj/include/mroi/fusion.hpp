#pragma once

#include <array>
#include <span>

#include "mroi/raster.hpp"

namespace mroi {

/// Pixelwise set intersection: 255 iff both inputs are 255.
/// Throws ErrorCode::dimension_mismatch for differently sized masks.
BinaryMask intersect(const BinaryMask& a, const BinaryMask& b);

/// Left fold of intersect over the masks, in order. Requires at least one mask.
BinaryMask intersect_all(std::span<const BinaryMask> masks);

/// Merges the segmented layers of one channel.
BinaryMask fuse_channel(std::span<const BinaryMask> layer_masks);

/// Merges the red, green and blue channel masks.
BinaryMask fuse_channels(const BinaryMask& r, const BinaryMask& g, const BinaryMask& b);

}  // namespace mroi
