// mroi: command-line front end for segmentation, ROI localization,
// phantom generation and evaluation.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 config error.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mroi/config.hpp"
#include "mroi/errors.hpp"
#include "mroi/eval.hpp"
#include "mroi/phantom.hpp"
#include "mroi/pipeline.hpp"
#include "mroi/rasterio.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitConfig = 3;

int exit_code_for(const mroi::Error& e) {
  switch (e.code()) {
    case mroi::ErrorCode::config:
    case mroi::ErrorCode::invalid_spec:
      return kExitConfig;
    default:
      return kExitIo;
  }
}

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".pgm" || ext == ".ppm";
}

std::vector<fs::path> list_images(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  bool dump_stages = false;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Pipeline config (JSON)");
  cmd->add_option("--set", opts.overrides, "Override a config value, e.g. quad.entropy_thresh=3.0");
  cmd->add_flag("--dump-stages", opts.dump_stages, "Write every intermediate raster");
  cmd->add_option("--jobs", opts.jobs, "Images processed concurrently")->check(CLI::PositiveNumber);
}

mroi::PipelineConfig resolve_config(const CommonOptions& opts) {
  mroi::PipelineConfig cfg = opts.config_path.empty() ? mroi::PipelineConfig{} : mroi::load_config(opts.config_path);
  for (const auto& o : opts.overrides) mroi::apply_override(cfg, o);
  if (opts.dump_stages) cfg.dump_stages = true;
  mroi::validate(cfg);
  return cfg;
}

// Runs `fn` over a single file or every image in a directory. A single
// file's failure is the command's failure; in batch mode failures are
// logged and skipped.
int for_each_input(const fs::path& input, int jobs, const std::function<void(const fs::path&)>& fn) {
  if (!fs::is_directory(input)) {
    fn(input);
    return kExitOk;
  }
  const std::vector<fs::path> files = list_images(input);
  std::atomic<std::size_t> next{0};
  std::atomic<int> failures{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < files.size(); i = next.fetch_add(1)) {
      try {
        fn(files[i]);
      } catch (const std::exception& e) {
        ++failures;
        std::lock_guard lock(log_mutex);
        std::cerr << "skipped: " << e.what() << '\n';
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min<int>(jobs, static_cast<int>(files.size())); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::cerr << files.size() - static_cast<std::size_t>(failures.load()) << "/" << files.size() << " images processed\n";
  return kExitOk;
}

int cmd_segment(const std::string& input, const std::string& out, const CommonOptions& opts) {
  const mroi::PipelineConfig cfg = resolve_config(opts);
  return for_each_input(input, opts.jobs, [&](const fs::path& p) { mroi::run_segment(p, cfg, out); });
}

int cmd_roi(const std::string& input, const std::string& out, const CommonOptions& opts) {
  const mroi::PipelineConfig cfg = resolve_config(opts);
  std::mutex print_mutex;
  return for_each_input(input, opts.jobs, [&](const fs::path& p) {
    const auto boxes = mroi::run_roi(p, cfg, out);
    std::lock_guard lock(print_mutex);
    std::cout << p.filename().string() << ": " << boxes.size() << " ROI box(es)\n";
  });
}

int cmd_phantom(int count, std::uint64_t seed, const std::string& out) {
  const auto suite = mroi::phantom_suite(count, seed);
  fs::create_directories(fs::path(out) / "regions");
  mroi::TruthTable truth;
  for (const auto& e : suite) {
    mroi::save_image(e.phantom.image, fs::path(out) / (e.id + ".png"));
    mroi::save_mask(e.phantom.breast_region, fs::path(out) / "regions" / (e.id + ".png"));
    if (!e.phantom.truth.empty()) truth[e.id] = e.phantom.truth;
  }
  mroi::write_file_atomic(fs::path(out) / "truth.csv", mroi::format_truth(truth));
  std::cout << "wrote " << suite.size() << " phantoms to " << out << '\n';
  return kExitOk;
}

int cmd_eval(const std::string& images, const std::string& truth_path, const std::string& regions,
             const std::string& report_path, const CommonOptions& opts) {
  const mroi::PipelineConfig cfg = resolve_config(opts);
  const mroi::TruthTable truth = mroi::read_truth_file(truth_path);
  std::vector<mroi::EvalImage> dataset;
  std::vector<std::string> load_failures;
  for (const fs::path& p : list_images(images)) {
    mroi::EvalImage item;
    item.id = p.stem().string();
    try {
      item.image = mroi::load_image(p);
      if (!regions.empty()) {
        const fs::path region = fs::path(regions) / p.filename();
        if (fs::exists(region)) {
          const mroi::RasterImage r = mroi::load_image(region);
          const auto s = r.samples();
          item.reference = mroi::BinaryMask::from_samples(r.width(), r.height(), {s.begin(), s.end()});
        }
      }
    } catch (const mroi::Error& e) {
      std::cerr << "skipped: " << e.what() << '\n';
      continue;
    }
    if (auto it = truth.find(item.id); it != truth.end()) item.truth = it->second;
    dataset.push_back(std::move(item));
  }
  const mroi::EvalReport report = mroi::evaluate(dataset, cfg, opts.jobs);
  const std::string doc = mroi::to_json(report, cfg).dump(2) + "\n";
  if (report_path.empty()) {
    std::cout << doc;
  } else {
    mroi::write_file_atomic(report_path, doc);
  }
  std::cerr << "ROI hits " << report.roi_hits << "/" << report.n_positive << ", clean negatives "
            << report.n_negative - report.false_alarm_images << "/" << report.n_negative;
  if (report.n_dice > 0) std::cerr << ", segmentation Dice>=0.90 " << report.segmentation_pass << "/" << report.n_dice;
  std::cerr << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mammogram ROI localization: layered block segmentation and entropy quadtree"};
  app.require_subcommand(1);

  CommonOptions seg_opts;
  std::string seg_input;
  std::string seg_out = ".";
  auto* segment = app.add_subcommand("segment", "Segment breast foreground into a binary mask");
  segment->add_option("input", seg_input, "Image file or directory")->required();
  segment->add_option("--out", seg_out, "Output directory");
  add_common(segment, seg_opts);

  CommonOptions roi_opts;
  std::string roi_input;
  std::string roi_out = ".";
  auto* roi = app.add_subcommand("roi", "Locate regions of interest");
  roi->add_option("input", roi_input, "Image file or directory")->required();
  roi->add_option("--out", roi_out, "Output directory");
  add_common(roi, roi_opts);

  CommonOptions eval_opts;
  std::string eval_images;
  std::string eval_truth;
  std::string eval_regions;
  std::string eval_report;
  auto* eval = app.add_subcommand("eval", "Score ROI predictions against ground truth");
  eval->add_option("--images", eval_images, "Directory of images")->required();
  eval->add_option("--truth", eval_truth, "Truth file: image_id,x,y,width,height per line")->required();
  eval->add_option("--regions", eval_regions, "Directory of reference region masks (same file names)");
  eval->add_option("--report", eval_report, "Report path (JSON); stdout when omitted");
  add_common(eval, eval_opts);

  int ph_count = 10;
  std::uint64_t ph_seed = 1;
  std::string ph_out = ".";
  auto* phantom = app.add_subcommand("phantom", "Generate a seeded synthetic phantom suite");
  phantom->add_option("--count", ph_count, "Number of phantoms (even)")->check(CLI::NonNegativeNumber);
  phantom->add_option("--seed", ph_seed, "Suite seed");
  phantom->add_option("--out", ph_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*segment) return cmd_segment(seg_input, seg_out, seg_opts);
    if (*roi) return cmd_roi(roi_input, roi_out, roi_opts);
    if (*eval) return cmd_eval(eval_images, eval_truth, eval_regions, eval_report, eval_opts);
    if (*phantom) return cmd_phantom(ph_count, ph_seed, ph_out);
  } catch (const mroi::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return 1;
}
