#include "mroi/fusion.hpp"

#include <string>
#include <vector>

#include "mroi/errors.hpp"

namespace mroi {

BinaryMask intersect(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::dimension_mismatch, "cannot intersect " + std::to_string(a.width()) + "x" +
                                                   std::to_string(a.height()) + " with " + std::to_string(b.width()) +
                                                   "x" + std::to_string(b.height()));
  }
  const auto sa = a.samples();
  const auto sb = b.samples();
  std::vector<std::uint8_t> out(sa.size());
  for (std::size_t i = 0; i < sa.size(); ++i) out[i] = sa[i] & sb[i];
  return BinaryMask::from_samples(a.width(), a.height(), std::move(out));
}

BinaryMask intersect_all(std::span<const BinaryMask> masks) {
  if (masks.empty()) throw Error(ErrorCode::dimension_mismatch, "intersection of zero masks");
  BinaryMask acc = masks[0];
  for (std::size_t i = 1; i < masks.size(); ++i) acc = intersect(acc, masks[i]);
  return acc;
}

BinaryMask fuse_channel(std::span<const BinaryMask> layer_masks) { return intersect_all(layer_masks); }

BinaryMask fuse_channels(const BinaryMask& r, const BinaryMask& g, const BinaryMask& b) {
  return intersect(intersect(r, g), b);
}

}  // namespace mroi
