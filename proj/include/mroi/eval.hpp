#pragma once

// Scoring of predicted ROI boxes against ground truth, and the batch
// evaluation report (hit rate on positives, clean rate on negatives,
// optional segmentation Dice when a reference region is known).

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mroi/config.hpp"
#include "mroi/phantom.hpp"
#include "mroi/quadroi.hpp"
#include "mroi/raster.hpp"

namespace mroi {

struct MatchPair {
  std::size_t pred = 0;
  std::size_t gt = 0;
  double iou = 0.0;

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

/// True when `gt` counts as found by `pred` under the criterion.
bool qualifies(const Rect& pred, const Rect& gt, const MatchCriterion& criterion);

/// Greedy one-to-one matching: qualifying pairs are taken by descending IoU
/// (ties by prediction index, then GT index); each prediction and each GT
/// is used at most once. Result is sorted by GT index.
std::vector<MatchPair> match(std::span<const Rect> pred, std::span<const Rect> gt, const MatchCriterion& criterion);
std::vector<MatchPair> match(std::span<const RoiBox> pred, std::span<const GroundTruthBox> gt,
                             const MatchCriterion& criterion);

inline constexpr double kSegmentationDicePass = 0.90;

struct EvalImage {
  std::string id;
  RasterImage image;
  std::vector<GroundTruthBox> truth;      // empty for negative images
  std::optional<BinaryMask> reference;    // known breast region, when available
};

struct ImageResult {
  std::string id;
  bool positive = false;
  std::vector<RoiBox> predicted;
  std::vector<GroundTruthBox> truth;
  std::vector<MatchPair> matches;
  std::optional<double> dice;
  bool failed = false;
  std::string error;

  bool hit() const { return positive && !matches.empty(); }
};

struct EvalReport {
  int n_images = 0;
  int n_positive = 0;
  int n_negative = 0;
  int n_failed = 0;
  int roi_hits = 0;
  double roi_hit_rate = 0.0;           // roi_hits / n_positive
  int false_alarm_images = 0;          // negatives with at least one box
  double zero_roi_rate = 0.0;          // clean negatives / n_negative
  int n_dice = 0;                      // images with a reference region
  int segmentation_pass = 0;           // Dice >= kSegmentationDicePass
  double mean_dice = 0.0;
  std::vector<ImageResult> per_image;  // sorted by id
};

/// Scores one already-processed image.
ImageResult score_image(const EvalImage& item, std::vector<RoiBox> predicted, const BinaryMask& segmentation,
                        const MatchCriterion& criterion);

/// Deterministic fold of per-image results in id order. Failed images are
/// counted in n_images and n_failed only.
EvalReport aggregate(std::vector<ImageResult> results);

/// Runs the full pipeline on every image (`jobs` worker threads) and
/// aggregates. Per-image failures are recorded, not thrown.
EvalReport evaluate(std::span<const EvalImage> dataset, const PipelineConfig& cfg, int jobs = 1);

nlohmann::json to_json(const EvalReport& report, const PipelineConfig& cfg);

using TruthTable = std::map<std::string, std::vector<GroundTruthBox>>;

/// Ground-truth text format: one box per line, `image_id,x,y,width,height`.
/// Blank lines and lines starting with '#' are ignored.
TruthTable read_truth_file(const std::filesystem::path& path);
std::string format_truth(const TruthTable& table);

}  // namespace mroi
