#pragma once

// Seeded synthetic mammogram-like phantoms with known mass locations.
//
// A phantom is a half-ellipse "breast" anchored on the left or right image
// edge, filled with a smooth tissue level plus Gaussian noise, on a black
// background. Masses are radially decaying Gaussian bumps. All randomness
// comes from one 64-bit seed through xoshiro256** (seeded by SplitMix64),
// so suites are byte-identical across runs and platforms.

#include <cstdint>
#include <string>
#include <vector>

#include "mroi/raster.hpp"

namespace mroi {

/// SplitMix64: used to expand one seed into generator state and to derive
/// independent per-phantom seeds.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

/// xoshiro256** 1.0 with Box-Muller normals.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  double normal();

 private:
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

enum class BreastSide { left, right };

struct BreastShape {
  double center_x = 0.0;  // on the anchoring image edge
  double center_y = 256.0;
  double axis_x = 400.0;  // horizontal semi-axis
  double axis_y = 240.0;  // vertical semi-axis
  BreastSide side = BreastSide::left;
};

struct MassSpec {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 10.0;          // pixels; the Gaussian sigma is radius / 2
  double peak_contrast = 60.0;   // intensity added at the center
};

struct PhantomSpec {
  int width = 512;
  int height = 512;
  BreastShape breast;
  double background_level = 180.0;
  /// Tissue level drops by `falloff` from the chest wall to the skin line
  /// (quadratic in normalized elliptical radius). 0 gives a flat breast.
  double falloff = 0.0;
  double tissue_noise_sigma = 0.0;
  std::vector<MassSpec> masses;
  std::uint64_t seed = 0;
};

struct GroundTruthBox {
  Rect rect;
  bool positive = true;

  friend bool operator==(const GroundTruthBox&, const GroundTruthBox&) = default;
};

struct Phantom {
  RasterImage image;  // 3 identical channels
  std::vector<GroundTruthBox> truth;
  BinaryMask breast_region;
};

bool in_breast(const BreastShape& b, double x, double y);

/// Noise-free intensity contribution of a mass at (x, y).
double mass_profile(const MassSpec& m, double x, double y);

/// Radius-bounded square around the mass, clipped to the image.
Rect mass_box(const MassSpec& m, int width, int height);

/// Throws ErrorCode::invalid_spec for masses outside the breast, negative
/// contrast, radius < 1, or non-positive image extents.
Phantom generate_phantom(const PhantomSpec& spec);

/// Parameters for phantom_suite. Radius and contrast ranges are calibration
/// targets; the tissue values are tuned so the default pipeline separates
/// masses from plain tissue.
struct SuiteParams {
  int width = 512;
  int height = 512;
  double level_min = 180.0;
  double level_max = 200.0;
  double falloff = 20.0;
  double noise_sigma = 0.7;
  double radius_min = 10.0;
  double radius_max = 40.0;
  double contrast_min = 40.0;
  double contrast_max = 90.0;
};

struct SuiteEntry {
  std::string id;
  PhantomSpec spec;
  Phantom phantom;
};

/// Deterministic draw of one suite phantom spec (with or without a mass).
PhantomSpec suite_spec(std::uint64_t seed, bool with_mass, const SuiteParams& params = {});

/// n phantoms (n even): even indices carry one mass, odd indices none.
/// Ids are "phantom_0000", "phantom_0001", ...
std::vector<SuiteEntry> phantom_suite(int n, std::uint64_t seed, const SuiteParams& params = {});

}  // namespace mroi
