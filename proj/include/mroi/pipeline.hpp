#pragma once

// End-to-end pipeline: split → slice → select → block-segment → fuse for
// the segmentation, then per-channel quadtree → fine leaves → ROI boxes.

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mroi/config.hpp"
#include "mroi/layers.hpp"
#include "mroi/quadroi.hpp"
#include "mroi/raster.hpp"

namespace mroi {

inline constexpr std::array<const char*, 3> kChannelNames{"red", "green", "blue"};

struct SegmentResult {
  std::array<ChannelPlane, 3> channels;
  std::array<std::vector<LayerPlane>, 3> layers;        // informative layers per channel
  std::array<std::vector<BinaryMask>, 3> layer_masks;   // one per informative layer
  std::array<BinaryMask, 3> channel_masks;
  BinaryMask mask;
};

SegmentResult segment_image(const RasterImage& img, const PipelineConfig& cfg);

struct RoiResult {
  SegmentResult segmentation;
  std::array<WorkingPlane, 3> working;
  std::vector<QuadTree> trees;  // red, green, blue
  std::array<BinaryMask, 3> fine_masks;
  BinaryMask fine_intersection;
  std::vector<RoiBox> boxes;
};

RoiResult locate_roi(const RasterImage& img, const PipelineConfig& cfg);

/// Writes every intermediate raster under `dir` (created if needed). Each
/// file is exactly the input of the stage that follows it.
void dump_segment_stages(const SegmentResult& seg, const std::filesystem::path& dir);
void dump_roi_stages(const RoiResult& roi, const std::filesystem::path& dir);

/// Structured record for one image: boxes, scores and the effective config.
nlohmann::json roi_report(const std::string& image_id, const RasterImage& img, const RoiResult& roi,
                          const PipelineConfig& cfg);

/// Loads `image`, segments it and writes `<stem>_mask.png` into out_dir
/// (plus `<stem>_stages/` when cfg.dump_stages). Errors carry the image path.
BinaryMask run_segment(const std::filesystem::path& image, const PipelineConfig& cfg,
                       const std::filesystem::path& out_dir);

/// Loads `image`, locates ROIs and writes `<stem>_overlay.png`,
/// `<stem>_edges_{red,green,blue}.png` and `<stem>_roi.json` into out_dir.
std::vector<RoiBox> run_roi(const std::filesystem::path& image, const PipelineConfig& cfg,
                            const std::filesystem::path& out_dir);

}  // namespace mroi
