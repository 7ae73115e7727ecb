#include "mroi/eval.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "mroi/errors.hpp"
#include "mroi/pipeline.hpp"

namespace mroi {

using nlohmann::json;

bool qualifies(const Rect& pred, const Rect& gt, const MatchCriterion& criterion) {
  if (criterion.center_rule) {
    // Center of the GT box, rounded down to a pixel.
    const int cx = gt.x + gt.width / 2;
    const int cy = gt.y + gt.height / 2;
    if (pred.contains(cx, cy)) return true;
  }
  return iou(pred, gt) >= criterion.iou_thresh;
}

std::vector<MatchPair> match(std::span<const Rect> pred, std::span<const Rect> gt, const MatchCriterion& criterion) {
  std::vector<MatchPair> candidates;
  for (std::size_t p = 0; p < pred.size(); ++p) {
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (qualifies(pred[p], gt[g], criterion)) candidates.push_back(MatchPair{p, g, iou(pred[p], gt[g])});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const MatchPair& a, const MatchPair& b) { return a.iou > b.iou; });
  std::vector<bool> pred_used(pred.size(), false);
  std::vector<bool> gt_used(gt.size(), false);
  std::vector<MatchPair> out;
  for (const MatchPair& c : candidates) {
    if (pred_used[c.pred] || gt_used[c.gt]) continue;
    pred_used[c.pred] = true;
    gt_used[c.gt] = true;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const MatchPair& a, const MatchPair& b) { return a.gt < b.gt; });
  return out;
}

std::vector<MatchPair> match(std::span<const RoiBox> pred, std::span<const GroundTruthBox> gt,
                             const MatchCriterion& criterion) {
  std::vector<Rect> p;
  std::vector<Rect> g;
  for (const auto& b : pred) p.push_back(b.rect);
  for (const auto& b : gt) g.push_back(b.rect);
  return match(std::span<const Rect>(p), std::span<const Rect>(g), criterion);
}

ImageResult score_image(const EvalImage& item, std::vector<RoiBox> predicted, const BinaryMask& segmentation,
                        const MatchCriterion& criterion) {
  ImageResult r;
  r.id = item.id;
  r.positive = !item.truth.empty();
  r.truth = item.truth;
  r.predicted = std::move(predicted);
  r.matches = match(std::span<const RoiBox>(r.predicted), std::span<const GroundTruthBox>(r.truth), criterion);
  if (item.reference) r.dice = dice(segmentation, *item.reference);
  return r;
}

EvalReport aggregate(std::vector<ImageResult> results) {
  std::stable_sort(results.begin(), results.end(),
                   [](const ImageResult& a, const ImageResult& b) { return a.id < b.id; });
  EvalReport rep;
  double dice_sum = 0.0;
  for (const ImageResult& r : results) {
    ++rep.n_images;
    if (r.failed) {
      ++rep.n_failed;
      continue;
    }
    if (r.positive) {
      ++rep.n_positive;
      if (r.hit()) ++rep.roi_hits;
    } else {
      ++rep.n_negative;
      if (!r.predicted.empty()) ++rep.false_alarm_images;
    }
    if (r.dice) {
      ++rep.n_dice;
      dice_sum += *r.dice;
      if (*r.dice >= kSegmentationDicePass) ++rep.segmentation_pass;
    }
  }
  rep.roi_hit_rate = rep.n_positive > 0 ? static_cast<double>(rep.roi_hits) / rep.n_positive : 0.0;
  rep.zero_roi_rate =
      rep.n_negative > 0 ? static_cast<double>(rep.n_negative - rep.false_alarm_images) / rep.n_negative : 0.0;
  rep.mean_dice = rep.n_dice > 0 ? dice_sum / rep.n_dice : 0.0;
  rep.per_image = std::move(results);
  return rep;
}

EvalReport evaluate(std::span<const EvalImage> dataset, const PipelineConfig& cfg, int jobs) {
  validate(cfg);
  std::vector<ImageResult> results(dataset.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < dataset.size(); i = next.fetch_add(1)) {
      const EvalImage& item = dataset[i];
      try {
        RoiResult roi = locate_roi(item.image, cfg);
        results[i] = score_image(item, std::move(roi.boxes), roi.segmentation.mask, cfg.criterion);
      } catch (const std::exception& e) {
        ImageResult r;
        r.id = item.id;
        r.positive = !item.truth.empty();
        r.truth = item.truth;
        r.failed = true;
        r.error = e.what();
        results[i] = std::move(r);
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(dataset.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return aggregate(std::move(results));
}

namespace {

json rect_json(const Rect& r) { return json{{"x", r.x}, {"y", r.y}, {"width", r.width}, {"height", r.height}}; }

}  // namespace

json to_json(const EvalReport& rep, const PipelineConfig& cfg) {
  json rows = json::array();
  for (const ImageResult& r : rep.per_image) {
    json pred = json::array();
    for (const RoiBox& b : r.predicted) {
      json j = rect_json(b.rect);
      j["score"] = b.score;
      pred.push_back(j);
    }
    json truth = json::array();
    for (const GroundTruthBox& g : r.truth) truth.push_back(rect_json(g.rect));
    json matched = json::array();
    json matches = json::array();
    for (const MatchPair& m : r.matches) {
      matched.push_back(m.gt);
      matches.push_back({{"pred", m.pred}, {"gt", m.gt}, {"iou", m.iou}});
    }
    json row{{"id", r.id},           {"positive", r.positive}, {"predicted", pred}, {"truth", truth},
             {"matched_gt", matched}, {"matches", matches},    {"hit", r.hit()},    {"failed", r.failed}};
    if (r.dice) row["dice"] = *r.dice;
    if (r.failed) row["error"] = r.error;
    rows.push_back(row);
  }
  return json{{"n_images", rep.n_images},
              {"n_positive", rep.n_positive},
              {"n_negative", rep.n_negative},
              {"n_failed", rep.n_failed},
              {"roi_hits", rep.roi_hits},
              {"roi_hit_rate", rep.roi_hit_rate},
              {"false_alarm_images", rep.false_alarm_images},
              {"zero_roi_rate", rep.zero_roi_rate},
              {"n_dice", rep.n_dice},
              {"segmentation_pass", rep.segmentation_pass},
              {"mean_dice", rep.mean_dice},
              {"per_image", rows},
              {"config", to_json(cfg)}};
}

TruthTable read_truth_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open truth file " + path.string());
  TruthTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string id;
    std::string field;
    std::vector<int> v;
    std::getline(ss, id, ',');
    try {
      while (std::getline(ss, field, ',')) v.push_back(std::stoi(field));
    } catch (const std::exception&) {
      v.clear();
    }
    if (id.empty() || v.size() != 4 || v[2] <= 0 || v[3] <= 0) {
      throw Error(ErrorCode::malformed, path.string() + ":" + std::to_string(line_no) +
                                            ": expected image_id,x,y,width,height");
    }
    table[id].push_back(GroundTruthBox{Rect{v[0], v[1], v[2], v[3]}, true});
  }
  return table;
}

std::string format_truth(const TruthTable& table) {
  std::ostringstream out;
  for (const auto& [id, boxes] : table) {
    for (const auto& b : boxes) {
      out << id << ',' << b.rect.x << ',' << b.rect.y << ',' << b.rect.width << ',' << b.rect.height << '\n';
    }
  }
  return out.str();
}

}  // namespace mroi
