#include <doctest.h>

#include <fstream>
#include <sstream>

#include "mroi/blockseg.hpp"
#include "mroi/errors.hpp"
#include "mroi/fusion.hpp"
#include "mroi/phantom.hpp"
#include "mroi/pipeline.hpp"
#include "mroi/rasterio.hpp"
#include "support.hpp"

using namespace mroi;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ChannelPlane load_plane(const fs::path& p) {
  const RasterImage img = load_image(p);
  REQUIRE(img.channels() == 1);
  const auto s = img.samples();
  return ChannelPlane(img.width(), img.height(), std::vector<std::uint8_t>(s.begin(), s.end()));
}

BinaryMask load_mask(const fs::path& p) {
  const ChannelPlane plane = load_plane(p);
  const auto s = plane.samples();
  return BinaryMask::from_samples(plane.width(), plane.height(), std::vector<std::uint8_t>(s.begin(), s.end()));
}

PhantomSpec strong_mass_spec(bool with_mass) {
  PhantomSpec s;
  s.background_level = 190.0;
  s.falloff = 20.0;
  s.tissue_noise_sigma = 0.7;
  s.seed = 5;
  if (with_mass) s.masses.push_back(MassSpec{160.0, 240.0, 30.0, 90.0});
  return s;
}

std::size_t fine_leaves_inside(const QuadTree& t, const Rect& box) {
  std::size_t n = 0;
  for (const QuadNode& leaf : t.leaves()) {
    if (leaf.side() <= 8 && !intersection(leaf.rect, box).empty()) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("segment_image on uniform inputs") {
  const PipelineConfig cfg;
  SUBCASE("all-black image with exact tiling is entirely background") {
    for (auto [w, h] : {std::pair{20, 30}, std::pair{500, 500}}) {
      CHECK(segment_image(RasterImage(w, h, 3, 0), cfg).mask.count() == 0);
    }
  }
  SUBCASE("all-black 512: border blocks smaller than 51 pixels stay foreground") {
    const BinaryMask m = segment_image(RasterImage(512, 512, 3, 0), cfg).mask;
    CHECK_FALSE(m.test(0, 0));
    CHECK_FALSE(m.test(505, 505));
    // The right column of blocks is 2 wide (20 pixels): never background.
    CHECK(m.test(511, 0));
    CHECK(m.test(0, 511));
    CHECK(m.count() == static_cast<std::size_t>(512 * 512 - 510 * 510));
  }
  SUBCASE("uniform 170 is foreground everywhere") {
    CHECK(segment_image(RasterImage(64, 48, 3, 170), cfg).mask.count() == 64u * 48u);
  }
  SUBCASE("uniform 120 lacks layer 3 and 4 content") {
    const BinaryMask m = segment_image(RasterImage(60, 60, 3, 120), cfg).mask;
    CHECK(m.count() == 0);
  }
  SUBCASE("gray input equals the replicated RGB input") {
    std::mt19937_64 rng(4);
    const ChannelPlane p = test::random_plane(rng, 40, 30, 0.4);
    const RasterImage gray(40, 30, 1, std::vector<std::uint8_t>(p.samples().begin(), p.samples().end()));
    CHECK(segment_image(gray, cfg).mask == segment_image(to_rgb(gray), cfg).mask);
  }
}

TEST_CASE("phantom segmentation recovers the breast region") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Phantom ph = generate_phantom(suite_spec(seed, seed % 2 == 0));
    CHECK(dice(segment_image(ph.image, PipelineConfig{}).mask, ph.breast_region) >= 0.9);
  }
}

TEST_CASE("locate_roi") {
  SUBCASE("all-black image yields no boxes") {
    const RoiResult r = locate_roi(RasterImage(512, 512, 3, 0), PipelineConfig{});
    CHECK(r.boxes.empty());
  }
  SUBCASE("a strong mass is boxed; its absence is not") {
    const Phantom pos = generate_phantom(strong_mass_spec(true));
    const Phantom neg = generate_phantom(strong_mass_spec(false));
    const RoiResult rp = locate_roi(pos.image, PipelineConfig{});
    const RoiResult rn = locate_roi(neg.image, PipelineConfig{});
    REQUIRE_FALSE(rp.boxes.empty());
    bool contains_center = false;
    for (const RoiBox& b : rp.boxes) {
      contains_center |= b.rect.contains(160, 240);
      CHECK(b.rect.within(512, 512));
      CHECK(b.score > 0.0);
      CHECK(b.score <= 1.0);
    }
    CHECK(contains_center);
    CHECK(rn.boxes.empty());
  }
  SUBCASE("a mass adds fine leaves over its box in every channel") {
    for (std::uint64_t seed : {10u, 20u, 30u, 40u, 50u}) {
      const PhantomSpec ps = suite_spec(seed, true);
      const PhantomSpec ns = suite_spec(seed, false);
      const RoiResult rp = locate_roi(generate_phantom(ps).image, PipelineConfig{});
      const RoiResult rn = locate_roi(generate_phantom(ns).image, PipelineConfig{});
      const Rect box = mass_box(ps.masses.at(0), ps.width, ps.height);
      for (std::size_t c = 0; c < 3; ++c) {
        CAPTURE(seed);
        CHECK(fine_leaves_inside(rp.trees[c], box) > fine_leaves_inside(rn.trees[c], box));
      }
    }
  }
}

TEST_CASE("run_roi output is byte-identical across runs") {
  const auto dir = test::scratch_dir("pipeline_det");
  const Phantom ph = generate_phantom(strong_mass_spec(true));
  save_image(ph.image, dir / "case.png");
  run_roi(dir / "case.png", PipelineConfig{}, dir / "a");
  run_roi(dir / "case.png", PipelineConfig{}, dir / "b");
  for (const char* f : {"case_roi.json", "case_overlay.png", "case_edges_red.png", "case_edges_green.png",
                        "case_edges_blue.png"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(dir / "a" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const auto report = nlohmann::json::parse(slurp(dir / "a" / "case_roi.json"));
  CHECK(report["image"] == "case");
  CHECK(report["width"] == 512);
  CHECK_FALSE(report["boxes"].empty());
}

TEST_CASE("run_roi and run_segment errors carry the path") {
  const auto dir = test::scratch_dir("pipeline_err");
  try {
    run_roi(dir / "missing.png", PipelineConfig{}, dir / "out");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
    CHECK(std::string(e.what()).find("missing.png") != std::string::npos);
  }
  CHECK_THROWS_AS(run_segment(dir / "missing.png", PipelineConfig{}, dir / "out"), Error);
}

TEST_CASE("dumped stages reproduce each following stage") {
  const auto dir = test::scratch_dir("pipeline_stages");
  const Phantom ph = generate_phantom(strong_mass_spec(true));
  save_image(ph.image, dir / "case.png");
  PipelineConfig cfg;
  cfg.dump_stages = true;
  const auto boxes = run_roi(dir / "case.png", cfg, dir / "out");
  const fs::path st = dir / "out" / "case_stages";

  std::array<BinaryMask, 3> channel_masks;
  std::array<BinaryMask, 3> fine;
  const BinaryMask mask = load_mask(st / "mask.png");
  for (std::size_t c = 0; c < 3; ++c) {
    const std::string name = kChannelNames[c];
    const ChannelPlane channel = load_plane(st / (name + ".png"));
    const auto layers = select_informative(slice_layers(channel, cfg.bands(), cfg.layer_mode), cfg.layer_keep);
    std::vector<BinaryMask> layer_masks;
    for (const LayerPlane& l : layers) {
      const std::string stem = name + "_layer" + std::to_string(l.band.index);
      const ChannelPlane dumped = load_plane(st / (stem + ".png"));
      CHECK(dumped == l.plane);
      layer_masks.push_back(load_mask(st / (stem + "_mask.png")));
      CHECK(segment_layer(dumped, cfg.blockseg) == layer_masks.back());
    }
    channel_masks[c] = load_mask(st / (name + "_mask.png"));
    CHECK(fuse_channel(layer_masks) == channel_masks[c]);

    const ChannelPlane working = load_plane(st / (name + "_working.png"));
    CHECK(prepare_working_plane(channel, mask).plane == working);
    const QuadTree tree = build_quadtree(working, cfg.quad);
    CHECK(leaf_edge_map(tree) == load_mask(st / (name + "_edges.png")));
    CHECK(load_mask(dir / "out" / ("case_edges_" + name + ".png")) == load_mask(st / (name + "_edges.png")));
    fine[c] = load_mask(st / (name + "_fine.png"));
    CHECK(fine_leaf_mask(tree, cfg.roi.fine_side) == fine[c]);
  }
  CHECK(fuse_channels(channel_masks[0], channel_masks[1], channel_masks[2]) == mask);
  CHECK(intersect_all(fine) == load_mask(st / "fine_intersection.png"));
  const auto again = extract_roi(fine, WorkingMapping{512, 512, 512}, cfg.roi);
  REQUIRE(again.size() == boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) CHECK(again[i].rect == boxes[i].rect);

  const BinaryMask seg = run_segment(dir / "case.png", cfg, dir / "seg");
  CHECK(seg == mask);
  CHECK(load_mask(dir / "seg" / "case_mask.png") == mask);
  CHECK(fs::exists(dir / "seg" / "case_stages" / "mask.png"));
}
