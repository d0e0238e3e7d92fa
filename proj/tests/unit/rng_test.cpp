#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "randcompare/rng.hpp"

namespace randcompare {
namespace {

TEST(RngStream, SameSeedSameSequence) {
  RngStream a(123);
  RngStream b(123);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(RngStream, DifferentSeedsDiffer) {
  RngStream a(1);
  RngStream b(2);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a.next() == b.next();
  EXPECT_EQ(equal, 0);
}

// Pins the generator so a change to the algorithm is caught.
TEST(RngStream, FirstOutputsAreStable) {
  RngStream a(0);
  RngStream b(0);
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, 0u);
  EXPECT_EQ(mix64(0), 0u);
  EXPECT_EQ(mix64(1), 0x5692161d100b05e5ULL);
}

TEST(RngStream, SubstreamsAreDistinctAndReproducible) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t a = 0; a < 10; ++a) {
    for (std::uint64_t b = 0; b < 100; ++b) seeds.insert(substream_seed(11, a, b));
  }
  EXPECT_EQ(seeds.size(), 1000u);
  EXPECT_EQ(substream_seed(11, 3, 4), substream_seed(11, 3, 4));
  EXPECT_NE(substream_seed(11, 3, 4), substream_seed(12, 3, 4));
}

TEST(RngStream, UniformRange) {
  RngStream r(9);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = r.uniform_open();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 3 * std::sqrt(1.0 / 12 / n));
}

TEST(RngStream, BoundedIsUniform) {
  RngStream r(10);
  const std::uint64_t k = 7;
  std::vector<int> counts(k, 0);
  const int n = 140000;
  for (int i = 0; i < n; ++i) {
    const auto x = r.bounded(k);
    ASSERT_LT(x, k);
    ++counts[x];
  }
  const double p = 1.0 / k;
  const double se = std::sqrt(p * (1 - p) / n);
  for (int c : counts) EXPECT_NEAR(c / double(n), p, 4 * se);
  EXPECT_EQ(r.bounded(1), 0u);
}

}  // namespace
}  // namespace randcompare
