#pragma once

// Entropy-driven quadtree decomposition and ROI extraction.
//
// Each channel is masked by the segmentation, resampled to a 512×512
// working square and decomposed: a node splits into four quadrants while
// the Shannon entropy of its intensity histogram exceeds a threshold.
// Regions the tree keeps dividing down to small leaves ("fine" leaves) are
// intersected across channels and reported as ROI boxes.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mroi/raster.hpp"

namespace mroi {

inline constexpr int kWorkingSide = 512;

struct Histogram256 {
  std::array<std::uint32_t, 256> counts{};
  std::uint64_t total = 0;

  void add(std::uint8_t v) {
    ++counts[v];
    ++total;
  }
  Histogram256& operator+=(const Histogram256& other);
};

/// Histogram of the plane's samples inside `r`.
Histogram256 histogram(const ChannelPlane& plane, const Rect& r);

/// Shannon entropy in bits, 0·log0 = 0; an empty histogram has entropy 0.
double entropy(const Histogram256& h);

/// Working-square to source-image coordinate mapping for nearest-neighbour
/// resampling: working pixel x samples source column floor(x·W/side).
struct WorkingMapping {
  int source_width = kWorkingSide;
  int source_height = kWorkingSide;
  int side = kWorkingSide;

  /// Smallest source rectangle covering every source pixel sampled by the
  /// working rectangle (and the full footprint when downsampling).
  Rect to_source(const Rect& working) const;
};

struct WorkingPlane {
  ChannelPlane plane;
  WorkingMapping mapping;
  bool empty_foreground = false;
};

ChannelPlane resample_nearest(const ChannelPlane& plane, int side);

/// Zeroes pixels outside `seg` and resamples to side × side.
WorkingPlane prepare_working_plane(const ChannelPlane& plane, const BinaryMask& seg, int side = kWorkingSide);

struct QuadParams {
  double entropy_thresh = 2.5;  // bits; split only when entropy is strictly greater
  int min_size = 1;             // nodes of this side or smaller never split
  int max_depth = 10;           // root depth is 0
};

struct QuadNode {
  Rect rect;
  int depth = 0;
  double entropy = 0.0;
  std::int32_t first_child = -1;  // children are nodes [first_child, first_child+4): NW, NE, SW, SE

  bool leaf() const { return first_child < 0; }
  int side() const { return rect.width; }
};

class QuadTree {
 public:
  QuadTree(std::vector<QuadNode> nodes, QuadParams params) : nodes_(std::move(nodes)), params_(params) {}

  const QuadNode& root() const { return nodes_.front(); }
  std::span<const QuadNode> nodes() const { return nodes_; }
  std::span<const QuadNode> children(const QuadNode& n) const {
    if (n.leaf()) return {};
    return std::span<const QuadNode>(nodes_).subspan(static_cast<std::size_t>(n.first_child), 4);
  }
  const QuadParams& params() const { return params_; }
  int side() const { return root().rect.width; }

  std::vector<QuadNode> leaves() const;
  std::size_t leaf_count() const;
  int depth() const;

 private:
  std::vector<QuadNode> nodes_;
  QuadParams params_;
};

/// Requires a square plane whose side is a power of two (512 in the
/// pipeline). Splits a node iff entropy > entropy_thresh, side > min_size
/// and depth < max_depth. Per-node histograms are built once per level:
/// a split scans its four quadrants and their histograms sum to the parent's.
QuadTree build_quadtree(const ChannelPlane& plane, const QuadParams& params);

/// 255 on every leaf's border pixels.
BinaryMask leaf_edge_map(const QuadTree& tree);

/// 255 on pixels covered by leaves of side <= fine_side.
BinaryMask fine_leaf_mask(const QuadTree& tree, int fine_side);

struct Component {
  Rect bbox;
  long long area = 0;
};

/// 4-connected foreground components in raster order of their first pixel.
std::vector<Component> connected_components(const BinaryMask& mask);

struct RoiParams {
  int fine_side = 8;
  int min_area = 64;  // in working-square pixels
};

struct RoiBox {
  Rect rect;          // source image coordinates
  Rect working_rect;  // working-square coordinates
  long long area = 0; // component pixels in the working square
  double score = 0.0; // area / working_rect area
};

/// Intersects the per-channel fine-leaf masks and turns each sufficiently
/// large 4-connected component into a box mapped back to the source image.
std::vector<RoiBox> extract_roi(std::span<const BinaryMask> fine_masks, const WorkingMapping& mapping,
                                const RoiParams& params);

}  // namespace mroi
