#include <doctest.h>

#include "mroi/errors.hpp"
#include "mroi/fusion.hpp"
#include "support.hpp"

using namespace mroi;

TEST_CASE("intersect laws") {
  std::mt19937_64 rng(2);
  const int w = 37;
  const int h = 23;
  const BinaryMask ones(w, h, true);
  const BinaryMask zeros(w, h, false);
  for (int trial = 0; trial < 50; ++trial) {
    const BinaryMask a = test::random_mask(rng, w, h, 0.6);
    const BinaryMask b = test::random_mask(rng, w, h, 0.4);
    const BinaryMask c = test::random_mask(rng, w, h, 0.7);
    CHECK(intersect(ones, a) == a);
    CHECK(intersect(zeros, a) == zeros);
    CHECK(intersect(a, a) == a);
    CHECK(intersect(a, b) == intersect(b, a));
    CHECK(intersect(intersect(a, b), c) == intersect(a, intersect(b, c)));
  }
}

TEST_CASE("intersect rejects mismatched sizes") {
  try {
    intersect(BinaryMask(4, 4), BinaryMask(4, 5));
    FAIL("expected a dimension error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::dimension_mismatch);
  }
  const std::array<BinaryMask, 3> masks{BinaryMask(3, 3), BinaryMask(3, 3), BinaryMask(2, 3)};
  CHECK_THROWS_AS(fuse_channel(masks), Error);
}

TEST_CASE("fuse_channel and fuse_channels") {
  std::mt19937_64 rng(17);
  const BinaryMask m = test::random_mask(rng, 16, 16);
  SUBCASE("three identical masks give that mask") {
    const std::array<BinaryMask, 3> same{m, m, m};
    CHECK(fuse_channel(same) == m);
    CHECK(fuse_channels(m, m, m) == m);
  }
  SUBCASE("an all-zero operand empties the result") {
    const BinaryMask z(16, 16);
    const std::array<BinaryMask, 3> with_zero{m, z, m};
    CHECK(fuse_channel(with_zero).count() == 0);
    CHECK(fuse_channels(m, m, z).count() == 0);
  }
  SUBCASE("pixelwise AND truth table") {
    for (int trial = 0; trial < 20; ++trial) {
      const std::array<BinaryMask, 3> ms{test::random_mask(rng, 19, 11), test::random_mask(rng, 19, 11),
                                         test::random_mask(rng, 19, 11)};
      const BinaryMask f = fuse_channel(ms);
      const BinaryMask g = fuse_channels(ms[0], ms[1], ms[2]);
      for (int y = 0; y < 11; ++y) {
        for (int x = 0; x < 19; ++x) {
          const bool truth = ms[0].test(x, y) && ms[1].test(x, y) && ms[2].test(x, y);
          CHECK(f.test(x, y) == truth);
          CHECK(g.test(x, y) == truth);
        }
      }
    }
  }
  SUBCASE("fused area never exceeds any constituent") {
    std::array<BinaryMask, 3> channel;
    std::size_t min_area = SIZE_MAX;
    for (auto& c : channel) {
      const std::array<BinaryMask, 3> layers{test::random_mask(rng, 20, 20, 0.9), test::random_mask(rng, 20, 20, 0.8),
                                             test::random_mask(rng, 20, 20, 0.95)};
      for (const auto& l : layers) min_area = std::min(min_area, l.count());
      c = fuse_channel(layers);
    }
    CHECK(fuse_channels(channel[0], channel[1], channel[2]).count() <= min_area);
  }
}
