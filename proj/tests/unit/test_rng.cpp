#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "lerw/rng.hpp"

using namespace lerw;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(Rng, TagsSeparateStreams) {
  EXPECT_NE(derive_seed(1, "walk"), derive_seed(1, "percolation-bonds"));
  EXPECT_NE(derive_seed(1, "replica", 0), derive_seed(1, "replica", 1));
  EXPECT_NE(derive_seed(1, "replica", 0), derive_seed(2, "replica", 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(7, "replica", i));
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(Rng, FrozenValues) {
  // mt19937_64 reference value and the derived-seed hash are part of the
  // reproducibility contract.
  std::mt19937_64 ref(5489u);
  for (int i = 0; i < 9999; ++i) ref();
  EXPECT_EQ(ref(), 9981545732273789042ULL);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Rng, UniformRangeAndMoments) {
  Rng r(3);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sq / n - mean * mean, 1.0 / 12.0, 2e-3);
}

TEST(Rng, NormalMoments) {
  Rng r(11);
  const int n = 200000;
  double sum = 0.0, sq = 0.0, quad = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
    quad += z * z * z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(quad / n, 3.0, 0.1);
}

TEST(Rng, BernoulliFrequency) {
  Rng r(5);
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) hits += r.bernoulli(0.3);
  EXPECT_NEAR(hits / double(n), 0.3, 4.0 * std::sqrt(0.21 / n));
}
