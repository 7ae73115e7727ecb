#pragma once

// Pipeline configuration: one JSON document with the key paths
//
//   layers.edges, layers.keep, layers.mode
//   blockseg.block_size, blockseg.zero_thresh, blockseg.zero_thresh_mode
//   quad.entropy_thresh, quad.min_size, quad.max_depth
//   roi.fine_side, roi.min_area
//   eval.iou_thresh, eval.center_rule
//   io.dump_stages
//
// Missing keys take their defaults; unknown keys are rejected.

#include <array>
#include <filesystem>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mroi/blockseg.hpp"
#include "mroi/layers.hpp"
#include "mroi/quadroi.hpp"

namespace mroi {

/// A ground-truth box is hit by a prediction when its center lies inside
/// the predicted rect (if center_rule) or their IoU reaches iou_thresh.
struct MatchCriterion {
  double iou_thresh = 0.25;
  bool center_rule = true;
};

struct PipelineConfig {
  std::array<int, 4> layer_edges = kDefaultEdges;
  std::vector<int> layer_keep{kDefaultKeep.begin(), kDefaultKeep.end()};
  LayerMode layer_mode = LayerMode::cumulative;
  BlockSegParams blockseg;
  QuadParams quad;
  RoiParams roi;
  MatchCriterion criterion;
  bool dump_stages = false;

  BandSet bands() const { return make_bands(layer_edges); }
};

/// Throws ErrorCode::config on out-of-range values.
void validate(const PipelineConfig& cfg);

PipelineConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const PipelineConfig& cfg);

/// Reads and validates a config file; throws io or config errors.
PipelineConfig load_config(const std::filesystem::path& path);

/// Applies "section.key=value"; the value is parsed as JSON when possible
/// and taken as a string otherwise.
void apply_override(PipelineConfig& cfg, std::string_view assignment);

std::string_view to_string(LayerMode mode);
std::string_view to_string(ZeroThreshMode mode);

}  // namespace mroi
