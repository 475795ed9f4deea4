#include <gtest/gtest.h>

#include "aykit/error.hpp"
#include "aykit/transform.hpp"
#include "support.hpp"

using namespace aykit;
namespace ts = testing_support;

namespace {

// min over a dense grid plus all atoms (both sides) of tail_rho - tail_nu.
double brute_tail_gap(const QuantileProfile& rho, const QuantileProfile& nu, double lo, double hi) {
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 20000; ++k) {
    const double y = lo + (hi - lo) * k / 20000.0;
    worst = std::min(worst, rho.tail(y) - nu.tail(y));
  }
  return worst;
}

double brute_call_gap(const AtomicMeasure& rho, const AtomicMeasure& nu) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto* m : {&rho, &nu})
    for (const auto& a : m->atoms()) worst = std::min(worst, ts::call(rho, a.x) - ts::call(nu, a.x));
  worst = std::min(worst, ts::call(rho, -100.0) - ts::call(nu, -100.0));
  return worst;
}

}  // namespace

TEST(Envelope, AtomicEnvelopeIsIntegratedQuantile) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = ts::random_measure(rng, 2 + trial % 6);
    const auto g = concave_envelope(hl_transform(mu));
    for (int k = 1; k <= 40; ++k) {
      const double l = k / 40.0;
      EXPECT_NEAR(g(l), mu.integrated_quantile(l), 1e-12);
    }
  }
}

TEST(Envelope, RejectsNonConcaveVertices) {
  EXPECT_THROW(PiecewiseLinearConcave({{0.0, 0.0}, {0.5, 0.1}, {1.0, 1.0}}), ValidationError);
  EXPECT_THROW(PiecewiseLinearConcave({{0.1, 0.0}, {1.0, 1.0}}), ValidationError);
}

TEST(DeltaOperator, InvertsHlTransform) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mu = ts::random_measure(rng, 1 + trial % 9);
    const auto back = delta_operator(hl_transform(mu));
    ASSERT_EQ(back.size(), mu.size()) << trial;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      EXPECT_NEAR(back.atoms()[i].x, mu.atoms()[i].x, 1e-9);
      EXPECT_NEAR(back.atoms()[i].p, mu.atoms()[i].p, 1e-9);
    }
  }
}

TEST(DeltaOperator, UniformOnThreePoints) {
  // l*q(l) has breakpoints (0,0), (1/3,1), (2/3,4/3), (1,1); all are hull vertices.
  const AtomicMeasure nu({{1.0, 1.0 / 3.0}, {2.0, 1.0 / 3.0}, {3.0, 1.0 / 3.0}});
  const auto d = delta_operator(nu);
  ASSERT_EQ(d.size(), 3u);
  const double xs[] = {-1.0, 1.0, 3.0};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(d.atoms()[i].x, xs[i], 1e-12);
    EXPECT_NEAR(d.atoms()[i].p, 1.0 / 3.0, 1e-12);
  }
  EXPECT_TRUE(stochastic_dominates(hl_transform(d), QuantileProfile::from_measure(nu)).holds);
}

TEST(DeltaOperator, HullOfNonConcaveProfileMergesAtoms) {
  // l*q(l) for q = 3 on (0, .2], 0 on (.2, .5], -1 beyond is not concave at .5.
  const QuantileProfile nu({{0.0, 0.2, 0.0, 3.0, 0.0}, {0.2, 0.5, 0.6, 0.0, 0.0}, {0.5, 1.0, 1.1, -1.0, 0.0}});
  const auto d = delta_operator(nu);
  // Graph points (0,0), (.2,.6), (.5,0), (1,-1); the last three are collinear,
  // so the hull keeps (0,0), (.2,.6), (1,-1) with slopes 3 and -2.
  ASSERT_EQ(d.size(), 2u);
  EXPECT_NEAR(d.atoms()[1].x, 3.0, 1e-12);
  EXPECT_NEAR(d.atoms()[0].x, -2.0, 1e-12);
  EXPECT_NEAR(d.atoms()[0].p, 0.8, 1e-12);
  // Its HL transform dominates nu stochastically.
  EXPECT_TRUE(stochastic_dominates(hl_transform(d), nu).holds);
}

TEST(DeltaOperator, SampledTailQuantile) {
  const AtomicMeasure mu({{-1.0, 0.5}, {1.0, 0.5}});
  const auto hl = hl_transform(mu);
  const auto d = delta_operator([&](double l) { return hl.tail_quantile(l); });
  EXPECT_NEAR(d.mean(), 0.0, 1e-9);
  EXPECT_NEAR(d.tail(0.0), 0.5, 1e-3);
  EXPECT_NEAR(d.upper(), 1.0, 1e-9);
}

TEST(DeltaOperator, NoSolutionWhenLambdaQDoesNotVanish) {
  EXPECT_THROW(delta_operator([](double l) { return 1.0 / l; }), NoSolutionError);
  EXPECT_THROW(delta_operator([](double l) { return std::pow(l, -1.5); }), NoSolutionError);
}

TEST(PseudoFenchel, TailMatchesDelta) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> xs(-4.0, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = ts::random_measure(rng, 2 + trial % 6);
    const auto hl = hl_transform(mu);
    const auto d = delta_operator(hl);
    for (int k = 0; k < 20; ++k) {
      const double x = xs(rng);
      EXPECT_NEAR(delta_tail_via_fenchel(hl, x), d.tail_open(x), 1e-9) << x;
      EXPECT_GE(pseudo_fenchel(hl, x), 0.0);
    }
  }
}

TEST(Orders, SelfComparison) {
  std::mt19937_64 rng(35);
  const auto mu = ts::random_measure(rng, 6);
  const auto v = stochastic_dominates(mu, mu);
  EXPECT_TRUE(v.holds);
  EXPECT_EQ(v.worst_gap, 0.0);
  EXPECT_TRUE(icx_dominates(mu, mu).holds);
}

TEST(Orders, ConstructedViolationWitness) {
  const AtomicMeasure rho({{0.0, 0.5}, {2.0, 0.5}});
  const AtomicMeasure nu({{1.0, 1.0}});
  const auto v = stochastic_dominates(rho, nu);
  EXPECT_FALSE(v.holds);
  EXPECT_NEAR(v.worst_gap, -0.5, 1e-15);
  EXPECT_GT(v.witness, 0.0);
  EXPECT_LE(v.witness, 1.0);
  EXPECT_TRUE(icx_dominates(rho, nu).holds);
}

TEST(Orders, StochasticMatchesBruteForce) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = ts::random_measure(rng, 2 + trial % 4), b = ts::random_measure(rng, 2 + trial % 5);
    const auto ha = hl_transform(a), hb = hl_transform(b);
    const auto v = stochastic_dominates(ha, hb);
    const double brute = brute_tail_gap(ha, hb, -4.0, 4.0);
    EXPECT_LE(v.worst_gap, brute + 1e-12);
    EXPECT_GE(v.worst_gap, brute - 1e-2);
  }
}

TEST(Orders, IcxMatchesBruteForce) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = ts::random_measure(rng, 2 + trial % 4), b = ts::random_measure(rng, 2 + trial % 5);
    EXPECT_NEAR(icx_dominates(a, b).worst_gap, brute_call_gap(a, b), 1e-12);
  }
}

TEST(Orders, HlEquivalence) {
  // HL(rho) >= HL(mu) stochastically iff rho >= mu in increasing convex order.
  std::mt19937_64 rng(38);
  int both = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto a = ts::random_measure(rng, 2 + trial % 4);
    const auto b = ts::random_measure(rng, 2 + trial % 3);
    if (trial % 2) a = shifted(a, 1.5);
    const bool icx = icx_dominates(a, b, 1e-10).holds;
    const bool st = stochastic_dominates(hl_transform(a), hl_transform(b), 1e-10).holds;
    EXPECT_EQ(icx, st) << trial;
    both += icx ? 1 : 0;
  }
  EXPECT_GT(both, 5);
}

TEST(Orders, HlDominatesMeasureInIcx) {
  std::mt19937_64 rng(39);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = ts::random_measure(rng, 2 + trial % 6);
    EXPECT_TRUE(icx_dominates(hl_transform(mu), QuantileProfile::from_measure(mu)).holds);
  }
}

TEST(Orders, MeanShiftedMeasureIsNotBelowHl) {
  // Shifting mu up to the HL mean pushes its top atom past r, where the HL
  // calls vanish, so the icx comparison fails there.
  const AtomicMeasure mu({{-1.0, 0.5}, {1.0, 0.5}});
  const auto hl = hl_transform(mu);
  EXPECT_NEAR(hl.mean(), std::log(2.0), 1e-12);
  const auto v = icx_dominates(hl, QuantileProfile::from_measure(shifted(mu, hl.mean())));
  EXPECT_FALSE(v.holds);
  EXPECT_GE(v.witness, 1.0);
}
