#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "mroi/errors.hpp"
#include "mroi/phantom.hpp"

using namespace mroi;

namespace {

PhantomSpec flat_spec() {
  PhantomSpec s;
  s.width = 200;
  s.height = 160;
  s.breast = BreastShape{0.0, 80.0, 150.0, 70.0, BreastSide::left};
  s.background_level = 120.0;
  s.seed = 42;
  return s;
}

}  // namespace

TEST_CASE("generator outputs") {
  // SplitMix64 published outputs for seed 0.
  SplitMix64 sm(0);
  CHECK(sm.next() == 0xe220a8397b1dcdafULL);
  CHECK(sm.next() == 0x6e789e6aa1b965f4ULL);

  // xoshiro256** step written out directly from its definition.
  SplitMix64 seeder(5);
  std::uint64_t s[4];
  for (auto& w : s) w = seeder.next();
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  Xoshiro256 a(5);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t expected = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    CHECK(a.next() == expected);
  }
  Xoshiro256 u(9);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("normal draws have unit variance") {
  Xoshiro256 rng(123);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    sum += v;
    sq += v * v;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("noise-free phantom without masses is flat inside the half-ellipse") {
  const Phantom p = generate_phantom(flat_spec());
  CHECK(p.truth.empty());
  CHECK(p.image.channels() == 3);
  for (int y = 0; y < 160; ++y) {
    for (int x = 0; x < 200; ++x) {
      const bool inside = in_breast(flat_spec().breast, x, y);
      CHECK(p.breast_region.test(x, y) == inside);
      for (int c = 0; c < 3; ++c) CHECK(p.image.at(x, y, c) == (inside ? 120 : 0));
    }
  }
}

TEST_CASE("single noise-free mass: peak at the center, radially decreasing") {
  PhantomSpec s = flat_spec();
  s.masses.push_back(MassSpec{60.0, 80.0, 20.0, 60.0});
  const Phantom p = generate_phantom(s);
  CHECK(p.image.at(60, 80) == 180);
  for (int d = 1; d < 40; ++d) {
    CHECK(p.image.at(60 + d, 80) <= p.image.at(60 + d - 1, 80));
    // Noise-free profile decreases strictly before rounding.
    CHECK(mass_profile(s.masses[0], 60 + d, 80) < mass_profile(s.masses[0], 60 + d - 1, 80));
  }
  REQUIRE(p.truth.size() == 1);
  CHECK(p.truth[0].rect == Rect{40, 60, 41, 41});
}

TEST_CASE("noise is clamped to the valid range") {
  PhantomSpec s = flat_spec();
  s.background_level = 250.0;
  s.tissue_noise_sigma = 30.0;
  s.masses.push_back(MassSpec{60.0, 80.0, 10.0, 90.0});
  const Phantom p = generate_phantom(s);
  int at_max = 0;
  for (auto v : p.image.samples()) at_max += v == 255;
  CHECK(at_max > 0);
}

TEST_CASE("same seed gives identical bytes; different seeds differ") {
  PhantomSpec s = flat_spec();
  s.tissue_noise_sigma = 5.0;
  s.masses.push_back(MassSpec{50.0, 70.0, 12.0, 70.0});
  const Phantom a = generate_phantom(s);
  const Phantom b = generate_phantom(s);
  CHECK(a.image == b.image);
  s.seed = 43;
  CHECK_FALSE(generate_phantom(s).image == a.image);
}

TEST_CASE("invalid specs are rejected") {
  PhantomSpec s = flat_spec();
  s.masses.push_back(MassSpec{190.0, 10.0, 10.0, 50.0});  // outside the ellipse
  try {
    generate_phantom(s);
    FAIL("expected invalid_spec");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_spec);
  }
  s.masses = {MassSpec{50.0, 80.0, 0.5, 50.0}};
  CHECK_THROWS_AS(generate_phantom(s), Error);
  s.masses = {MassSpec{50.0, 80.0, 10.0, -1.0}};
  CHECK_THROWS_AS(generate_phantom(s), Error);
}

TEST_CASE("GT box contains every pixel above half the mass peak") {
  Xoshiro256 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const PhantomSpec s = suite_spec(rng.next(), true);
    const MassSpec& m = s.masses.at(0);
    const Rect box = mass_box(m, s.width, s.height);
    for (int y = 0; y < s.height; ++y) {
      for (int x = 0; x < s.width; ++x) {
        if (mass_profile(m, x, y) > m.peak_contrast / 2.0) CHECK(box.contains(x, y));
      }
    }
    CHECK(box.within(s.width, s.height));
  }
}

TEST_CASE("phantom_suite") {
  SUBCASE("n=2 gives one positive and one negative") {
    const auto suite = phantom_suite(2, 1);
    REQUIRE(suite.size() == 2);
    CHECK(suite[0].phantom.truth.size() == 1);
    CHECK(suite[1].phantom.truth.empty());
    CHECK(suite[0].id == "phantom_0000");
  }
  SUBCASE("fixed seed reproduces the suite; counts split evenly") {
    const auto a = phantom_suite(50, 99);
    const auto b = phantom_suite(50, 99);
    REQUIRE(a.size() == 50);
    int positives = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].phantom.image == b[i].phantom.image);
      CHECK(a[i].phantom.truth == b[i].phantom.truth);
      positives += !a[i].phantom.truth.empty();
      for (const auto& m : a[i].spec.masses) {
        CHECK(m.radius >= 10.0);
        CHECK(m.radius <= 40.0);
        CHECK(m.peak_contrast >= 40.0);
        CHECK(m.peak_contrast <= 90.0);
        CHECK(in_breast(a[i].spec.breast, m.center_x, m.center_y));
      }
    }
    CHECK(positives == 25);
  }
  SUBCASE("odd n is rejected") { CHECK_THROWS_AS(phantom_suite(3, 1), Error); }
  SUBCASE("positive and negative specs from one seed share geometry and noise") {
    const PhantomSpec pos = suite_spec(1234, true);
    const PhantomSpec neg = suite_spec(1234, false);
    CHECK(pos.seed == neg.seed);
    CHECK(pos.background_level == neg.background_level);
    CHECK(neg.masses.empty());
    REQUIRE(pos.masses.size() == 1);
    const Phantom a = generate_phantom(pos);
    const Phantom b = generate_phantom(neg);
    const Rect far = mass_box(MassSpec{pos.masses[0].center_x, pos.masses[0].center_y, pos.masses[0].radius * 4, 1}, 512, 512);
    int equal_outside = 0;
    int total_outside = 0;
    for (int y = 0; y < 512; ++y) {
      for (int x = 0; x < 512; ++x) {
        if (far.contains(x, y)) continue;
        ++total_outside;
        equal_outside += a.image.at(x, y) == b.image.at(x, y);
      }
    }
    CHECK(equal_outside == total_outside);
  }
}
