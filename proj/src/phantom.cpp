#include "mroi/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "mroi/errors.hpp"

namespace mroi {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

double sq(double v) { return v * v; }

double normalized_radius_sq(const BreastShape& b, double x, double y) {
  return sq((x - b.center_x) / b.axis_x) + sq((y - b.center_y) / b.axis_y);
}

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  SplitMix64 sm(seed);
  for (auto& s : s_) s = sm.next();
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int Xoshiro256::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(static_cast<long long>(hi) - lo + 1);
  return lo + static_cast<int>(next() % span);
}

double Xoshiro256::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

bool in_breast(const BreastShape& b, double x, double y) {
  if (b.side == BreastSide::left ? x < b.center_x : x > b.center_x) return false;
  return normalized_radius_sq(b, x, y) <= 1.0;
}

double mass_profile(const MassSpec& m, double x, double y) {
  const double sigma = m.radius / 2.0;
  return m.peak_contrast * std::exp(-(sq(x - m.center_x) + sq(y - m.center_y)) / (2.0 * sigma * sigma));
}

Rect mass_box(const MassSpec& m, int width, int height) {
  const int x0 = std::max(0, static_cast<int>(std::floor(m.center_x - m.radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(m.center_y - m.radius)));
  const int x1 = std::min(width, static_cast<int>(std::ceil(m.center_x + m.radius)) + 1);
  const int y1 = std::min(height, static_cast<int>(std::ceil(m.center_y + m.radius)) + 1);
  return Rect{x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

Phantom generate_phantom(const PhantomSpec& spec) {
  if (spec.width < 1 || spec.height < 1) throw Error(ErrorCode::invalid_spec, "image extent must be positive");
  if (spec.breast.axis_x <= 0 || spec.breast.axis_y <= 0) {
    throw Error(ErrorCode::invalid_spec, "breast axes must be positive");
  }
  for (const auto& m : spec.masses) {
    if (m.radius < 1.0) throw Error(ErrorCode::invalid_spec, "mass radius must be >= 1");
    if (m.peak_contrast < 0.0) throw Error(ErrorCode::invalid_spec, "mass peak_contrast must be >= 0");
    if (!in_breast(spec.breast, m.center_x, m.center_y)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "mass at (%.1f, %.1f) lies outside the breast region", m.center_x, m.center_y);
      throw Error(ErrorCode::invalid_spec, buf);
    }
  }

  Xoshiro256 rng(spec.seed);
  Phantom out;
  out.breast_region = BinaryMask(spec.width, spec.height);
  ChannelPlane gray(spec.width, spec.height);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      if (!in_breast(spec.breast, x, y)) continue;
      out.breast_region.set(x, y, true);
      double v = spec.background_level - spec.falloff * normalized_radius_sq(spec.breast, x, y);
      for (const auto& m : spec.masses) v += mass_profile(m, x, y);
      // Noise is drawn for every breast pixel in raster order so the tissue
      // texture does not depend on the mass list.
      if (spec.tissue_noise_sigma > 0.0) v += spec.tissue_noise_sigma * rng.normal();
      gray(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  const auto s = gray.samples();
  std::vector<std::uint8_t> rgb(s.size() * 3);
  for (std::size_t i = 0; i < s.size(); ++i) rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = s[i];
  out.image = RasterImage(spec.width, spec.height, 3, std::move(rgb));
  for (const auto& m : spec.masses) out.truth.push_back(GroundTruthBox{mass_box(m, spec.width, spec.height), true});
  return out;
}

namespace {

bool disk_inside(const BreastShape& b, const MassSpec& m, int width, int height) {
  if (m.center_x - m.radius < 0 || m.center_y - m.radius < 0 || m.center_x + m.radius > width - 1 ||
      m.center_y + m.radius > height - 1) {
    return false;
  }
  constexpr int kSteps = 32;
  for (int k = 0; k < kSteps; ++k) {
    const double a = 2.0 * std::numbers::pi * k / kSteps;
    if (!in_breast(b, m.center_x + m.radius * std::cos(a), m.center_y + m.radius * std::sin(a))) return false;
  }
  return true;
}

}  // namespace

PhantomSpec suite_spec(std::uint64_t seed, bool with_mass, const SuiteParams& p) {
  Xoshiro256 rng(seed);
  PhantomSpec spec;
  spec.width = p.width;
  spec.height = p.height;
  spec.breast.side = rng.uniform() < 0.5 ? BreastSide::left : BreastSide::right;
  spec.breast.center_x = spec.breast.side == BreastSide::left ? 0.0 : p.width - 1.0;
  spec.breast.center_y = p.height / 2.0 + rng.uniform(-0.03, 0.03) * p.height;
  spec.breast.axis_x = rng.uniform(0.70, 0.92) * p.width;
  spec.breast.axis_y = rng.uniform(0.40, 0.46) * p.height;
  spec.background_level = rng.uniform(p.level_min, p.level_max);
  spec.falloff = p.falloff;
  spec.tissue_noise_sigma = p.noise_sigma;
  spec.seed = rng.next();

  // The mass draw happens unconditionally so that a positive and a negative
  // phantom from the same seed share breast geometry and tissue noise.
  MassSpec m;
  m.radius = rng.uniform(p.radius_min, p.radius_max);
  m.peak_contrast = rng.uniform(p.contrast_min, p.contrast_max);
  const BreastShape& b = spec.breast;
  const double xmin = b.side == BreastSide::left ? 0.0 : p.width - 1.0 - b.axis_x;
  const double xmax = b.side == BreastSide::left ? b.axis_x : p.width - 1.0;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    m.center_x = std::round(rng.uniform(xmin, xmax));
    m.center_y = std::round(rng.uniform(b.center_y - b.axis_y, b.center_y + b.axis_y));
    if (disk_inside(b, m, p.width, p.height)) break;
  }
  if (!disk_inside(b, m, p.width, p.height)) {
    throw Error(ErrorCode::invalid_spec, "could not place a mass inside the breast region");
  }
  if (with_mass) spec.masses.push_back(m);
  return spec;
}

std::vector<SuiteEntry> phantom_suite(int n, std::uint64_t seed, const SuiteParams& params) {
  if (n < 0 || n % 2 != 0) throw Error(ErrorCode::invalid_spec, "suite size must be a non-negative even number");
  SplitMix64 seeds(seed);
  std::vector<SuiteEntry> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "phantom_%04d", i);
    SuiteEntry e;
    e.id = id;
    e.spec = suite_spec(seeds.next(), i % 2 == 0, params);
    e.phantom = generate_phantom(e.spec);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace mroi
