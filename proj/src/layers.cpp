#include "mroi/layers.hpp"

#include <string>

#include "mroi/errors.hpp"

namespace mroi {

BandSet make_bands(const std::array<int, 4>& edges) {
  BandSet bands;
  int lo = 0;
  for (std::size_t k = 0; k < 5; ++k) {
    const int hi = k < 4 ? edges[k] : 256;
    bands[k] = LayerBand{static_cast<int>(k) + 1, lo, hi};
    lo = hi;
  }
  validate_bands(bands);
  return bands;
}

void validate_bands(const BandSet& bands) {
  int expected_lo = 0;
  for (std::size_t k = 0; k < bands.size(); ++k) {
    const LayerBand& b = bands[k];
    if (b.index != static_cast<int>(k) + 1) {
      throw Error(ErrorCode::config, "band " + std::to_string(k + 1) + " has index " + std::to_string(b.index));
    }
    if (b.lo != expected_lo || b.hi <= b.lo) {
      throw Error(ErrorCode::config, "band " + std::to_string(b.index) + " [" + std::to_string(b.lo) + "," +
                                         std::to_string(b.hi) + ") breaks the partition of [0,255]");
    }
    expected_lo = b.hi;
  }
  if (expected_lo != 256) throw Error(ErrorCode::config, "band 5 must end at 255 inclusive");
}

int band_of(const BandSet& bands, int v) {
  for (const auto& b : bands) {
    if (b.contains(v)) return b.index;
  }
  throw Error(ErrorCode::config, "intensity " + std::to_string(v) + " not covered by any band");
}

LayerPlane slice_band(const ChannelPlane& plane, const LayerBand& band, LayerMode mode) {
  // Lookup table: value -> kept value or 0.
  std::array<std::uint8_t, 256> lut{};
  for (int v = 0; v < 256; ++v) {
    const bool keep = mode == LayerMode::disjoint ? band.contains(v) : v >= band.lo;
    lut[static_cast<std::size_t>(v)] = keep ? static_cast<std::uint8_t>(v) : 0;
  }
  ChannelPlane out(plane.width(), plane.height());
  const auto src = plane.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = lut[src[i]];
  return LayerPlane{band, std::move(out)};
}

std::array<LayerPlane, 5> slice_layers(const ChannelPlane& plane, const BandSet& bands, LayerMode mode) {
  validate_bands(bands);
  std::array<LayerPlane, 5> out;
  for (std::size_t k = 0; k < 5; ++k) out[k] = slice_band(plane, bands[k], mode);
  return out;
}

std::vector<LayerPlane> select_informative(const std::array<LayerPlane, 5>& layers, const std::vector<int>& keep) {
  std::vector<LayerPlane> out;
  out.reserve(keep.size());
  for (int index : keep) {
    if (index < 1 || index > 5) throw Error(ErrorCode::config, "layer index " + std::to_string(index) + " out of 1..5");
    out.push_back(layers[static_cast<std::size_t>(index - 1)]);
  }
  return out;
}

}  // namespace mroi
