#include "mroi/pipeline.hpp"

#include <iostream>

#include "mroi/blockseg.hpp"
#include "mroi/errors.hpp"
#include "mroi/fusion.hpp"
#include "mroi/rasterio.hpp"

namespace mroi {

namespace fs = std::filesystem;
using nlohmann::json;

SegmentResult segment_image(const RasterImage& img, const PipelineConfig& cfg) {
  validate(cfg);
  const BandSet bands = cfg.bands();
  SegmentResult out;
  out.channels = split_channels(img);
  for (std::size_t c = 0; c < 3; ++c) {
    out.layers[c] = select_informative(slice_layers(out.channels[c], bands, cfg.layer_mode), cfg.layer_keep);
    for (const LayerPlane& layer : out.layers[c]) out.layer_masks[c].push_back(segment_layer(layer, cfg.blockseg));
    out.channel_masks[c] = fuse_channel(out.layer_masks[c]);
  }
  out.mask = fuse_channels(out.channel_masks[0], out.channel_masks[1], out.channel_masks[2]);
  return out;
}

RoiResult locate_roi(const RasterImage& img, const PipelineConfig& cfg) {
  RoiResult out;
  out.segmentation = segment_image(img, cfg);
  for (std::size_t c = 0; c < 3; ++c) {
    out.working[c] = prepare_working_plane(out.segmentation.channels[c], out.segmentation.mask);
    out.trees.push_back(build_quadtree(out.working[c].plane, cfg.quad));
    out.fine_masks[c] = fine_leaf_mask(out.trees.back(), cfg.roi.fine_side);
  }
  out.fine_intersection = intersect_all(out.fine_masks);
  out.boxes = extract_roi(out.fine_masks, out.working[0].mapping, cfg.roi);
  return out;
}

void dump_segment_stages(const SegmentResult& seg, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t c = 0; c < 3; ++c) {
    const std::string name = kChannelNames[c];
    save_plane(seg.channels[c], dir / (name + ".png"));
    for (std::size_t k = 0; k < seg.layers[c].size(); ++k) {
      const std::string layer = name + "_layer" + std::to_string(seg.layers[c][k].band.index);
      save_plane(seg.layers[c][k].plane, dir / (layer + ".png"));
      save_mask(seg.layer_masks[c][k], dir / (layer + "_mask.png"));
    }
    save_mask(seg.channel_masks[c], dir / (name + "_mask.png"));
  }
  save_mask(seg.mask, dir / "mask.png");
}

void dump_roi_stages(const RoiResult& roi, const fs::path& dir) {
  dump_segment_stages(roi.segmentation, dir);
  for (std::size_t c = 0; c < 3; ++c) {
    const std::string name = kChannelNames[c];
    save_plane(roi.working[c].plane, dir / (name + "_working.png"));
    save_mask(leaf_edge_map(roi.trees[c]), dir / (name + "_edges.png"));
    save_mask(roi.fine_masks[c], dir / (name + "_fine.png"));
  }
  save_mask(roi.fine_intersection, dir / "fine_intersection.png");
}

json roi_report(const std::string& image_id, const RasterImage& img, const RoiResult& roi,
                const PipelineConfig& cfg) {
  json boxes = json::array();
  for (const RoiBox& b : roi.boxes) {
    boxes.push_back({{"x", b.rect.x},
                     {"y", b.rect.y},
                     {"width", b.rect.width},
                     {"height", b.rect.height},
                     {"score", b.score},
                     {"area", b.area},
                     {"working", {b.working_rect.x, b.working_rect.y, b.working_rect.width, b.working_rect.height}}});
  }
  json leaves = json::array();
  for (const QuadTree& t : roi.trees) leaves.push_back(t.leaf_count());
  return json{{"image", image_id},
              {"width", img.width()},
              {"height", img.height()},
              {"channels", img.channels()},
              {"segmented_pixels", roi.segmentation.mask.count()},
              {"empty_foreground", roi.working[0].empty_foreground},
              {"leaf_counts", leaves},
              {"boxes", boxes},
              {"config", to_json(cfg)}};
}

namespace {

template <typename Fn>
auto with_image_context(const fs::path& image, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), image.string() + ": " + e.what());
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorCode::io, image.string() + ": " + e.what());
  }
}

}  // namespace

BinaryMask run_segment(const fs::path& image, const PipelineConfig& cfg, const fs::path& out_dir) {
  return with_image_context(image, [&] {
    const RasterImage img = load_image(image);
    SegmentResult seg = segment_image(img, cfg);
    fs::create_directories(out_dir);
    const std::string stem = image.stem().string();
    save_mask(seg.mask, out_dir / (stem + "_mask.png"));
    if (cfg.dump_stages) dump_segment_stages(seg, out_dir / (stem + "_stages"));
    return std::move(seg.mask);
  });
}

std::vector<RoiBox> run_roi(const fs::path& image, const PipelineConfig& cfg, const fs::path& out_dir) {
  return with_image_context(image, [&] {
    const RasterImage img = load_image(image);
    RoiResult roi = locate_roi(img, cfg);
    const std::string stem = image.stem().string();
    if (roi.working[0].empty_foreground) {
      std::cerr << "warning: " << image.string() << ": segmentation has no foreground\n";
    }
    fs::create_directories(out_dir);

    OverlaySpec overlay{img, {}, std::nullopt};
    for (const RoiBox& b : roi.boxes) overlay.boxes.push_back(OverlayBox{b.rect, {255, 0, 0}});
    render_overlay(overlay, out_dir / (stem + "_overlay.png"));
    for (std::size_t c = 0; c < 3; ++c) {
      save_mask(leaf_edge_map(roi.trees[c]), out_dir / (stem + "_edges_" + kChannelNames[c] + ".png"));
    }
    write_file_atomic(out_dir / (stem + "_roi.json"), roi_report(stem, img, roi, cfg).dump(2) + "\n");
    if (cfg.dump_stages) dump_roi_stages(roi, out_dir / (stem + "_stages"));
    return std::move(roi.boxes);
  });
}

}  // namespace mroi
