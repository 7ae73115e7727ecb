#pragma once

// Test-only helpers: seeded random rasters and a scratch directory.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>
#include <random>
#include <string>

#include "mroi/raster.hpp"

namespace mroi::test {

inline ChannelPlane random_plane(std::mt19937_64& rng, int w, int h, double zero_fraction = 0.3) {
  ChannelPlane p(w, h);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> v(1, 255);
  for (auto& s : p.samples()) s = u(rng) < zero_fraction ? 0 : static_cast<std::uint8_t>(v(rng));
  return p;
}

inline BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double fg_fraction = 0.5) {
  BinaryMask m(w, h);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) m.set(x, y, u(rng) < fg_fraction);
  }
  return m;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mroi_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string data_path(const std::string& file) { return std::string(MROI_TEST_DATA_DIR) + "/" + file; }

struct EntropyFixture {
  double expected = 0.0;
  std::vector<std::uint32_t> counts;
};

/// Rows of data/entropy_histograms.txt (see make_fixtures.py).
inline std::vector<EntropyFixture> load_entropy_fixtures() {
  std::ifstream in(data_path("entropy_histograms.txt"));
  std::vector<EntropyFixture> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    EntropyFixture f;
    ss >> f.expected;
    std::uint32_t c = 0;
    while (ss >> c) f.counts.push_back(c);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace mroi::test
