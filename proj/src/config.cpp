#include "mroi/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "mroi/errors.hpp"

namespace mroi {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::config, msg); }

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
    }
  }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail("bad type for '" + where + "." + key + "'");
  }
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

std::string_view to_string(LayerMode mode) { return mode == LayerMode::disjoint ? "disjoint" : "cumulative"; }

std::string_view to_string(ZeroThreshMode mode) {
  return mode == ZeroThreshMode::absolute ? "absolute" : "fraction";
}

void validate(const PipelineConfig& cfg) {
  make_bands(cfg.layer_edges);
  if (cfg.layer_keep.empty()) fail("layers.keep must name at least one layer");
  std::set<int> seen;
  for (int k : cfg.layer_keep) {
    if (k < 1 || k > 5) fail("layers.keep entries must be in 1..5");
    if (!seen.insert(k).second) fail("layers.keep has duplicate entry " + std::to_string(k));
  }
  if (cfg.blockseg.block_size < 1 || cfg.blockseg.block_size > 4096) fail("blockseg.block_size must be in 1..4096");
  if (cfg.blockseg.zero_thresh < 0) fail("blockseg.zero_thresh must be >= 0");
  if (!std::isfinite(cfg.quad.entropy_thresh) || cfg.quad.entropy_thresh < -1.0 || cfg.quad.entropy_thresh > 8.0) {
    fail("quad.entropy_thresh must be in [-1, 8]");
  }
  if (cfg.quad.min_size < 1 || cfg.quad.min_size > kWorkingSide) fail("quad.min_size must be in 1..512");
  if (cfg.quad.max_depth < 0 || cfg.quad.max_depth > 10) fail("quad.max_depth must be in 0..10");
  if (!is_power_of_two(cfg.roi.fine_side) || cfg.roi.fine_side > kWorkingSide) {
    fail("roi.fine_side must be a power of two <= 512");
  }
  if (cfg.roi.min_area < 0) fail("roi.min_area must be >= 0");
  if (!(cfg.criterion.iou_thresh > 0.0 && cfg.criterion.iou_thresh <= 1.0)) fail("eval.iou_thresh must be in (0, 1]");
}

PipelineConfig config_from_json(const json& doc) {
  PipelineConfig cfg;
  check_keys(doc, "", {"layers", "blockseg", "quad", "roi", "eval", "io"});

  if (doc.contains("layers")) {
    const json& s = doc.at("layers");
    check_keys(s, "layers", {"edges", "keep", "mode"});
    const auto edges = get<std::vector<int>>(s, "edges", "layers", {cfg.layer_edges.begin(), cfg.layer_edges.end()});
    if (edges.size() != 4) fail("layers.edges must list exactly four interior edges");
    std::copy(edges.begin(), edges.end(), cfg.layer_edges.begin());
    cfg.layer_keep = get<std::vector<int>>(s, "keep", "layers", cfg.layer_keep);
    const auto mode = get<std::string>(s, "mode", "layers", std::string(to_string(cfg.layer_mode)));
    if (mode == "disjoint") cfg.layer_mode = LayerMode::disjoint;
    else if (mode == "cumulative") cfg.layer_mode = LayerMode::cumulative;
    else fail("layers.mode must be 'disjoint' or 'cumulative'");
  }
  if (doc.contains("blockseg")) {
    const json& s = doc.at("blockseg");
    check_keys(s, "blockseg", {"block_size", "zero_thresh", "zero_thresh_mode"});
    cfg.blockseg.block_size = get<int>(s, "block_size", "blockseg", cfg.blockseg.block_size);
    cfg.blockseg.zero_thresh = get<int>(s, "zero_thresh", "blockseg", cfg.blockseg.zero_thresh);
    const auto mode = get<std::string>(s, "zero_thresh_mode", "blockseg", "absolute");
    if (mode == "absolute") cfg.blockseg.mode = ZeroThreshMode::absolute;
    else if (mode == "fraction") cfg.blockseg.mode = ZeroThreshMode::fraction;
    else fail("blockseg.zero_thresh_mode must be 'absolute' or 'fraction'");
  }
  if (doc.contains("quad")) {
    const json& s = doc.at("quad");
    check_keys(s, "quad", {"entropy_thresh", "min_size", "max_depth"});
    cfg.quad.entropy_thresh = get<double>(s, "entropy_thresh", "quad", cfg.quad.entropy_thresh);
    cfg.quad.min_size = get<int>(s, "min_size", "quad", cfg.quad.min_size);
    cfg.quad.max_depth = get<int>(s, "max_depth", "quad", cfg.quad.max_depth);
  }
  if (doc.contains("roi")) {
    const json& s = doc.at("roi");
    check_keys(s, "roi", {"fine_side", "min_area"});
    cfg.roi.fine_side = get<int>(s, "fine_side", "roi", cfg.roi.fine_side);
    cfg.roi.min_area = get<int>(s, "min_area", "roi", cfg.roi.min_area);
  }
  if (doc.contains("eval")) {
    const json& s = doc.at("eval");
    check_keys(s, "eval", {"iou_thresh", "center_rule"});
    cfg.criterion.iou_thresh = get<double>(s, "iou_thresh", "eval", cfg.criterion.iou_thresh);
    cfg.criterion.center_rule = get<bool>(s, "center_rule", "eval", cfg.criterion.center_rule);
  }
  if (doc.contains("io")) {
    const json& s = doc.at("io");
    check_keys(s, "io", {"dump_stages"});
    cfg.dump_stages = get<bool>(s, "dump_stages", "io", cfg.dump_stages);
  }
  validate(cfg);
  return cfg;
}

json to_json(const PipelineConfig& cfg) {
  return json{
      {"layers", {{"edges", cfg.layer_edges}, {"keep", cfg.layer_keep}, {"mode", to_string(cfg.layer_mode)}}},
      {"blockseg",
       {{"block_size", cfg.blockseg.block_size},
        {"zero_thresh", cfg.blockseg.zero_thresh},
        {"zero_thresh_mode", to_string(cfg.blockseg.mode)}}},
      {"quad",
       {{"entropy_thresh", cfg.quad.entropy_thresh},
        {"min_size", cfg.quad.min_size},
        {"max_depth", cfg.quad.max_depth}}},
      {"roi", {{"fine_side", cfg.roi.fine_side}, {"min_area", cfg.roi.min_area}}},
      {"eval", {{"iou_thresh", cfg.criterion.iou_thresh}, {"center_rule", cfg.criterion.center_rule}}},
      {"io", {{"dump_stages", cfg.dump_stages}}},
  };
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("cannot parse " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

void apply_override(PipelineConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    fail("override must look like section.key=value, got '" + std::string(assignment) + "'");
  }
  const std::string section(assignment.substr(0, dot));
  const std::string key(assignment.substr(dot + 1, eq - dot - 1));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json doc = to_json(cfg);
  if (!doc.contains(section) || !doc[section].contains(key)) {
    fail("unknown key '" + section + "." + key + "'");
  }
  doc[section][key] = value;
  cfg = config_from_json(doc);
}

}  // namespace mroi
