#include "mroi/quadroi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mroi/errors.hpp"
#include "mroi/fusion.hpp"

namespace mroi {

Histogram256& Histogram256::operator+=(const Histogram256& other) {
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  total += other.total;
  return *this;
}

Histogram256 histogram(const ChannelPlane& plane, const Rect& r) {
  Histogram256 h;
  const auto s = plane.samples();
  for (int y = r.y; y < r.bottom(); ++y) {
    const std::uint8_t* row = s.data() + static_cast<std::size_t>(y) * plane.width();
    for (int x = r.x; x < r.right(); ++x) ++h.counts[row[x]];
  }
  h.total = static_cast<std::uint64_t>(r.area());
  return h;
}

double entropy(const Histogram256& h) {
  if (h.total == 0) return 0.0;
  const double total = static_cast<double>(h.total);
  double e = 0.0;
  for (std::uint32_t c : h.counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    e -= p * std::log2(p);
  }
  // A single occupied bin gives -1·log2(1) = -0.0; report +0.
  return e == 0.0 ? 0.0 : e;
}

Rect WorkingMapping::to_source(const Rect& w) const {
  if (w.empty()) return Rect{0, 0, 0, 0};
  auto lo = [&](int v, int extent) { return static_cast<int>(static_cast<long long>(v) * extent / side); };
  auto hi = [&](int v, int extent) {
    return static_cast<int>((static_cast<long long>(v) * extent + side - 1) / side);
  };
  const int x0 = lo(w.x, source_width);
  const int y0 = lo(w.y, source_height);
  // Covers the last sampled pixel floor((x1-1)·W/side) as well as the
  // ceil(x1·W/side) footprint; the two coincide except when upsampling.
  const int x1 = std::min(source_width, std::max(hi(w.right(), source_width), lo(w.right() - 1, source_width) + 1));
  const int y1 = std::min(source_height, std::max(hi(w.bottom(), source_height), lo(w.bottom() - 1, source_height) + 1));
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

ChannelPlane resample_nearest(const ChannelPlane& plane, int side) {
  const int w = plane.width();
  const int h = plane.height();
  if (w < 1 || h < 1) throw Error(ErrorCode::malformed, "cannot resample an empty plane");
  if (w == side && h == side) return plane;
  ChannelPlane out(side, side);
  std::vector<int> src_x(static_cast<std::size_t>(side));
  for (int x = 0; x < side; ++x) {
    src_x[static_cast<std::size_t>(x)] = static_cast<int>(static_cast<long long>(x) * w / side);
  }
  for (int y = 0; y < side; ++y) {
    const int sy = static_cast<int>(static_cast<long long>(y) * h / side);
    for (int x = 0; x < side; ++x) out(x, y) = plane(src_x[static_cast<std::size_t>(x)], sy);
  }
  return out;
}

WorkingPlane prepare_working_plane(const ChannelPlane& plane, const BinaryMask& seg, int side) {
  if (plane.width() != seg.width() || plane.height() != seg.height()) {
    throw Error(ErrorCode::dimension_mismatch, "plane and segmentation mask differ in size");
  }
  ChannelPlane masked = plane;
  auto dst = masked.samples();
  const auto m = seg.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] &= m[i];
  WorkingPlane out;
  out.plane = resample_nearest(masked, side);
  out.mapping = WorkingMapping{plane.width(), plane.height(), side};
  out.empty_foreground = seg.count() == 0;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<QuadNode> QuadTree::leaves() const {
  std::vector<QuadNode> out;
  for (const auto& n : nodes_) {
    if (n.leaf()) out.push_back(n);
  }
  return out;
}

std::size_t QuadTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const QuadNode& n) { return n.leaf(); }));
}

int QuadTree::depth() const {
  int d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const ChannelPlane& plane, const QuadParams& params) : plane_(plane), params_(params) {}

  std::vector<QuadNode> build() {
    const Rect root{0, 0, plane_.width(), plane_.height()};
    nodes_.push_back(QuadNode{root, 0, 0.0, -1});
    grow(0, histogram(plane_, root));
    return std::move(nodes_);
  }

 private:
  void grow(std::size_t index, const Histogram256& hist) {
    const double e = entropy(hist);
    nodes_[index].entropy = e;
    const Rect r = nodes_[index].rect;
    const int depth = nodes_[index].depth;
    if (!(e > params_.entropy_thresh && r.width > params_.min_size && depth < params_.max_depth && r.width >= 2)) {
      return;
    }
    const int half = r.width / 2;
    const std::array<Rect, 4> quads{Rect{r.x, r.y, half, half}, Rect{r.x + half, r.y, half, half},
                                    Rect{r.x, r.y + half, half, half}, Rect{r.x + half, r.y + half, half, half}};
    const auto first = static_cast<std::int32_t>(nodes_.size());
    nodes_[index].first_child = first;
    for (const Rect& q : quads) nodes_.push_back(QuadNode{q, depth + 1, 0.0, -1});

    std::array<Histogram256, 4> child_hist;
    for (std::size_t k = 0; k < 4; ++k) child_hist[k] = histogram(plane_, quads[k]);
    for (std::size_t k = 0; k < 4; ++k) grow(static_cast<std::size_t>(first) + k, child_hist[k]);
  }

  const ChannelPlane& plane_;
  QuadParams params_;
  std::vector<QuadNode> nodes_;
};

}  // namespace

QuadTree build_quadtree(const ChannelPlane& plane, const QuadParams& params) {
  const int side = plane.width();
  if (side < 1 || plane.height() != side || (side & (side - 1)) != 0) {
    throw Error(ErrorCode::dimension_mismatch, "quadtree input must be a power-of-two square, got " +
                                                   std::to_string(plane.width()) + "x" + std::to_string(plane.height()));
  }
  if (params.min_size < 1) throw Error(ErrorCode::config, "quad.min_size must be >= 1");
  if (params.max_depth < 0) throw Error(ErrorCode::config, "quad.max_depth must be >= 0");
  return QuadTree(TreeBuilder(plane, params).build(), params);
}

BinaryMask leaf_edge_map(const QuadTree& tree) {
  const int side = tree.side();
  BinaryMask out(side, side);
  for (const auto& n : tree.nodes()) {
    if (!n.leaf()) continue;
    const Rect& r = n.rect;
    out.fill(Rect{r.x, r.y, r.width, 1}, true);
    out.fill(Rect{r.x, r.bottom() - 1, r.width, 1}, true);
    out.fill(Rect{r.x, r.y, 1, r.height}, true);
    out.fill(Rect{r.right() - 1, r.y, 1, r.height}, true);
  }
  return out;
}

BinaryMask fine_leaf_mask(const QuadTree& tree, int fine_side) {
  const int side = tree.side();
  BinaryMask out(side, side);
  for (const auto& n : tree.nodes()) {
    if (n.leaf() && n.side() <= fine_side) out.fill(n.rect, true);
  }
  return out;
}

std::vector<Component> connected_components(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * h, 0);
  std::vector<Component> out;
  std::vector<int> stack;
  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      const std::size_t start = static_cast<std::size_t>(y0) * w + x0;
      if (seen[start] || !mask.test(x0, y0)) continue;
      seen[start] = 1;
      stack.push_back(static_cast<int>(start));
      int minx = x0, maxx = x0, miny = y0, maxy = y0;
      long long area = 0;
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        const int x = p % w;
        const int y = p / w;
        ++area;
        minx = std::min(minx, x);
        maxx = std::max(maxx, x);
        miny = std::min(miny, y);
        maxy = std::max(maxy, y);
        auto visit = [&](int nx, int ny) {
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) return;
          const std::size_t q = static_cast<std::size_t>(ny) * w + nx;
          if (seen[q] || !mask.test(nx, ny)) return;
          seen[q] = 1;
          stack.push_back(static_cast<int>(q));
        };
        visit(x - 1, y);
        visit(x + 1, y);
        visit(x, y - 1);
        visit(x, y + 1);
      }
      out.push_back(Component{Rect{minx, miny, maxx - minx + 1, maxy - miny + 1}, area});
    }
  }
  return out;
}

std::vector<RoiBox> extract_roi(std::span<const BinaryMask> fine_masks, const WorkingMapping& mapping,
                                const RoiParams& params) {
  const BinaryMask merged = intersect_all(fine_masks);
  std::vector<RoiBox> boxes;
  for (const Component& c : connected_components(merged)) {
    if (c.area < params.min_area) continue;
    RoiBox box;
    box.working_rect = c.bbox;
    box.rect = mapping.to_source(c.bbox);
    box.area = c.area;
    box.score = static_cast<double>(c.area) / static_cast<double>(c.bbox.area());
    boxes.push_back(box);
  }
  return boxes;
}

}  // namespace mroi
