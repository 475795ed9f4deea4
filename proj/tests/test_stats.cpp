#include <gtest/gtest.h>

#include <random>

#include "aykit/error.hpp"
#include "aykit/stats.hpp"
#include "aykit/transform.hpp"

using namespace aykit;

TEST(Ecdf, Counts) {
  const Ecdf e({3.0, 1.0, 2.0, 2.0});
  EXPECT_DOUBLE_EQ(e(2.0), 0.75);
  EXPECT_DOUBLE_EQ(e.left(2.0), 0.25);
  EXPECT_DOUBLE_EQ(e(0.0), 0.0);
  EXPECT_DOUBLE_EQ(e(10.0), 1.0);
  EXPECT_THROW(Ecdf({}), ValidationError);
}

TEST(Ks, SingleSampleAgainstContinuous) {
  const double d = ks_distance(Ecdf({0.3}), uniform_cdf());
  EXPECT_NEAR(d, 0.7, 1e-15);
  EXPECT_GE(ks_distance(Ecdf({0.5}), uniform_cdf()), 0.5);
}

TEST(Ks, QuantileSamplerIsWithinKolmogorovBound) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const AtomicMeasure mu({{-1.0, 0.5}, {1.0, 0.5}});
  const auto hl = hl_transform(mu);
  std::vector<double> s(100000);
  for (auto& x : s) x = hl.tail_quantile(1.0 - u(rng));
  EXPECT_LT(ks_distance(Ecdf(s), cdf_of(hl)), 1.36 / std::sqrt(1e5));
  std::vector<double> v(100000);
  for (auto& x : v) x = u(rng);
  EXPECT_LT(ks_distance(Ecdf(v), uniform_cdf()), 1.36 / std::sqrt(1e5));
}

TEST(Ks, AtomicTargetExactProportions) {
  const AtomicMeasure mu({{0.0, 0.25}, {1.0, 0.75}});
  EXPECT_NEAR(ks_distance(Ecdf({0.0, 1.0, 1.0, 1.0}), cdf_of(mu)), 0.0, 1e-15);
  // Shifting the samples off the atoms is detected at the atom.
  EXPECT_NEAR(ks_distance(Ecdf({0.1, 1.0, 1.0, 1.0}), cdf_of(mu)), 0.25, 1e-15);
}

TEST(Tv, IdenticalAndWindowed) {
  const AtomicMeasure mu({{-1.0, 0.5}, {1.0, 0.5}});
  const std::vector<double> exact{-1.0, 1.0, -1.0, 1.0};
  EXPECT_EQ(tv_atomic(exact, mu), 0.0);
  const std::vector<double> near{-1.01, 1.02, -0.99, 1.0};
  EXPECT_EQ(tv_atomic(near, mu, 0.05), 0.0);
  EXPECT_NEAR(tv_atomic(near, mu, 0.0), 0.75, 1e-15);
  const std::vector<double> lopsided{1.0, 1.0, 1.0, -1.0};
  EXPECT_NEAR(tv_atomic(lopsided, mu), 0.25, 1e-15);
  EXPECT_THROW(tv_atomic(std::vector<double>{}, mu), ValidationError);
}

TEST(NormalCdf, Values) {
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-16);
  EXPECT_NEAR(normal_cdf(0.5) - normal_cdf(-0.5), 0.38292492254802624, 1e-14);
  EXPECT_NEAR(normal_cdf(1.5) - normal_cdf(-1.5), 0.8663855974622838, 1e-14);
}
