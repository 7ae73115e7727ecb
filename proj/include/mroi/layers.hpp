#pragma once

// Intensity-band layering of a channel plane. Five bands partition
// [0,255]; by default they are [0,50) [50,100) [100,150) [150,200) [200,255].

#include <array>
#include <cstdint>
#include <vector>

#include "mroi/raster.hpp"

namespace mroi {

struct LayerBand {
  int index = 1;  // 1..5
  int lo = 0;     // inclusive
  int hi = 256;   // exclusive; band 5 always ends at 256 (255 inclusive)

  bool contains(int v) const { return v >= lo && v < hi; }
  friend bool operator==(const LayerBand&, const LayerBand&) = default;
};

using BandSet = std::array<LayerBand, 5>;

/// How a layer plane is populated from its band.
///  - disjoint:   keep v where lo <= v < hi (the band itself)
///  - cumulative: keep v where v >= lo (bands k..5 together)
enum class LayerMode { disjoint, cumulative };

struct LayerPlane {
  LayerBand band;
  ChannelPlane plane;
};

inline constexpr std::array<int, 4> kDefaultEdges{50, 100, 150, 200};
inline constexpr std::array<int, 3> kDefaultKeep{2, 3, 4};

/// Builds the five bands from four strictly increasing interior edges in
/// (0, 255]. Throws ErrorCode::config otherwise.
BandSet make_bands(const std::array<int, 4>& edges = kDefaultEdges);

/// Throws ErrorCode::config unless the bands are indexed 1..5, ordered,
/// non-overlapping and cover [0,255] exactly.
void validate_bands(const BandSet& bands);

/// Index (1..5) of the band containing v.
int band_of(const BandSet& bands, int v);

std::array<LayerPlane, 5> slice_layers(const ChannelPlane& plane, const BandSet& bands,
                                       LayerMode mode = LayerMode::disjoint);

/// Single-band slice.
LayerPlane slice_band(const ChannelPlane& plane, const LayerBand& band, LayerMode mode = LayerMode::disjoint);

/// Keeps the listed band indices in the listed order (default 2, 3, 4).
std::vector<LayerPlane> select_informative(const std::array<LayerPlane, 5>& layers,
                                           const std::vector<int>& keep = {kDefaultKeep.begin(), kDefaultKeep.end()});

}  // namespace mroi
