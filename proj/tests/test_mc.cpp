#include <gtest/gtest.h>

#include <cmath>

#include "aykit/error.hpp"
#include "aykit/mc.hpp"

using namespace aykit;

namespace {

GenSpec exp_spec(double sigma = 1.0, double dt = 1e-3) {
  GenSpec s;
  s.kind = GenKind::exp_martingale;
  s.dt = dt;
  s.horizon = 1.0;
  s.volatility = sigma;
  s.start = 1.0;
  s.base_seed = 5;
  return s;
}

}  // namespace

TEST(GenSpec, Validation) {
  GenSpec s = exp_spec();
  EXPECT_NO_THROW(s.validate());
  s.dt = 0.0;
  EXPECT_THROW(s.validate(), ValidationError);
  s = exp_spec();
  s.start = 0.0;
  EXPECT_THROW(s.validate(), ValidationError);
  s = exp_spec();
  s.horizon = 1e-4;
  EXPECT_THROW(s.validate(), ValidationError);
  s = exp_spec();
  s.kind = GenKind::exit_interval;
  s.upper = 0.5;
  EXPECT_THROW(s.validate(), ValidationError);
  EXPECT_EQ(gen_kind_from_string("exp"), GenKind::exp_martingale);
  EXPECT_THROW(gen_kind_from_string("levy"), ValidationError);
}

TEST(Generate, Deterministic) {
  const auto s = exp_spec();
  const auto a = generate(s, 17), b = generate(s, 17), c = generate(s, 18);
  EXPECT_EQ(a.path.values(), b.path.values());
  EXPECT_NE(a.path.values(), c.path.values());
  EXPECT_EQ(stream_seed(5, 17), stream_seed(5, 17));
  EXPECT_NE(stream_seed(5, 17, 0), stream_seed(5, 17, 1));
}

TEST(Generate, ExpMartingaleRecomputed) {
  auto s = exp_spec(0.7, 1e-2);
  s.start = 2.0;
  const auto g = generate(s, 3);
  boost::random::mt19937_64 eng(stream_seed(s.base_seed, 3));
  boost::random::normal_distribution<double> z;
  double b = 0.0;
  for (std::size_t k = 1; k < g.path.size(); ++k) {
    b += std::sqrt(s.dt) * z(eng);
    const double t = static_cast<double>(k) * s.dt;
    EXPECT_NEAR(g.path[k], 2.0 * std::exp(0.7 * b - 0.245 * t), 1e-12 * g.path[k]);
  }
}

TEST(Generate, ExitIntervalTerminalValues) {
  GenSpec s;
  s.kind = GenKind::exit_interval;
  s.dt = 1e-3;
  s.horizon = 50.0;
  s.start = 1.0;
  s.upper = 4.0;
  for (std::size_t i = 0; i < 20; ++i) {
    const auto g = generate(s, i);
    ASSERT_TRUE(g.event);
    if (g.event->kind == StopKind::horizon_censored) continue;
    const double end = g.path.values().back();
    EXPECT_TRUE(end == 0.0 || end == 4.0) << end;
    EXPECT_EQ(g.path[g.event->index], end);
  }
}

TEST(Generate, StoppedAtZeroIsAbsorbed) {
  GenSpec s;
  s.kind = GenKind::bm_stopped_at_0;
  s.dt = 1e-3;
  s.horizon = 3.0;
  s.start = 0.1;
  const auto g = generate(s, 0);
  ASSERT_TRUE(g.event);
  ASSERT_EQ(g.event->kind, StopKind::hit_zero);
  for (std::size_t k = g.event->index; k < g.path.size(); ++k) EXPECT_EQ(g.path[k], 0.0);
}

TEST(UniformLaw, SmallRunIsUniform) {
  const auto rep = uniform_law_report(exp_spec(), 4000);
  EXPECT_LT(*rep.ks_stat, 0.05);
  EXPECT_LE(rep.censored_fraction, 0.002);
  EXPECT_FALSE(rep.inconclusive);
  EXPECT_EQ(rep.samples.size(), 4000u);
}

TEST(UniformLaw, GridMaximumIsBiasedLow) {
  RunOptions grid;
  grid.bridge_max = false;
  auto s = exp_spec(1.0, 1e-2);
  const auto bridged = uniform_law_report(s, 4000);
  const auto coarse = uniform_law_report(s, 4000, grid);
  EXPECT_EQ(coarse.notes.at("maximum"), "grid maximum");
  // N0/Nbar is larger when the maximum is missed between grid points.
  double mb = 0.0, mg = 0.0;
  for (double v : bridged.samples) mb += v;
  for (double v : coarse.samples) mg += v;
  EXPECT_GT(mg, mb);
  EXPECT_LT(*bridged.ks_stat, *coarse.ks_stat);
}

TEST(UniformLaw, DegenerateHorizonIsInconclusive) {
  auto s = exp_spec();
  s.horizon = s.dt;
  RunOptions opt;
  opt.auto_extend = false;
  const auto rep = uniform_law_report(s, 500, opt);
  EXPECT_GT(rep.censored_fraction, 0.9);
  EXPECT_TRUE(rep.inconclusive);
}

TEST(UniformLaw, ThreadCountDoesNotChangeResults) {
  RunOptions one, three;
  three.threads = 3;
  const auto a = uniform_law_report(exp_spec(), 300, one);
  const auto b = uniform_law_report(exp_spec(), 300, three);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(*a.ks_stat, *b.ks_stat);
  EXPECT_EQ(a.censored_fraction, b.censored_fraction);
}

TEST(UniformLaw, ExitIntervalBarrierSplit) {
  GenSpec s;
  s.kind = GenKind::exit_interval;
  s.dt = 1e-3;
  s.horizon = 20.0;
  s.start = 1.0;
  s.upper = 4.0;
  const auto rep = uniform_law_report(s, 3000);
  EXPECT_NEAR(rep.stats.at("barrier_probability"), 0.25, 0.03);
  EXPECT_LT(*rep.ks_stat, 0.05);
}

TEST(UniformLaw, RejectsBrownian) {
  GenSpec s;
  s.kind = GenKind::brownian;
  EXPECT_THROW(uniform_law_report(s, 10), DomainError);
}

TEST(LastPassage, SmallRun) {
  auto s = exp_spec(1.0, 1e-2);
  s.horizon = 4.0;
  const auto rep = last_passage_report(s, 4000, {0.01, 1.0, 4.0});
  ASSERT_EQ(rep.table.size(), 3u);
  EXPECT_NEAR(rep.table[1].target, 0.3829249225480262, 1e-14);
  for (const auto& r : rep.table) EXPECT_NEAR(r.empirical, r.target, 0.04) << r.level;
  EXPECT_LT(rep.table[0].empirical, 0.1);
  EXPECT_THROW(last_passage_report(s, 10, {9.0}), DomainError);
}

TEST(BreachLaw, FlooredDriverBreachesExactly) {
  GenSpec s;
  s.kind = GenKind::floored_gbm_stopped_at_0;
  s.dt = 1e-3;
  s.horizon = 5.0;
  s.volatility = 1.0;
  s.start = 1.0;
  s.floor = 0.05;
  const auto rep = breach_law_report(s, DrawdownFunction::linear(0.5), 2.0, 1000);
  EXPECT_LT(rep.stats.at("max_breach_error"), 1e-12);
  EXPECT_LT(*rep.ks_stat, 0.08);
  EXPECT_GT(rep.stats.at("breached_fraction"), 0.99);
  EXPECT_LE(rep.censored_fraction, 0.002);
}

TEST(Bridge, MaximumOfOneStep) {
  GenSpec s = exp_spec(1.0, 1.0);
  // P(max of a standard bridge from 0 to 0 >= y) = exp(-2 y^2).
  int above = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    BridgeSampler b(s, i);
    if (b.update_max(0.0, 0.0, 0.0) >= 0.5) ++above;
  }
  EXPECT_NEAR(above / double(n), std::exp(-0.5), 0.015);
}

TEST(Bridge, CrossingProbability) {
  GenSpec s = exp_spec(1.0, 1.0);
  int up = 0, down = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    BridgeSampler b(s, i);
    if (b.crosses_above(0.0, 0.2, 0.5)) ++up;
    if (b.crosses_below(0.0, 0.2, -0.3)) ++down;
  }
  EXPECT_NEAR(up / double(n), std::exp(-2.0 * 0.5 * 0.3), 0.015);
  EXPECT_NEAR(down / double(n), std::exp(-2.0 * 0.3 * 0.5), 0.015);
}

TEST(Bridge, EndpointsAndFarLevels) {
  GenSpec s = exp_spec(1.0, 1e-4);
  BridgeSampler b(s, 0);
  EXPECT_TRUE(b.crosses_above(0.0, 1.0, 0.5));
  EXPECT_TRUE(b.crosses_below(0.0, -1.0, -0.5));
  EXPECT_FALSE(b.crosses_above(0.0, 0.0, 1.0));
  EXPECT_EQ(b.update_max(0.0, 0.0, 1.0), 1.0);
  EXPECT_GE(b.update_max(0.0, 0.3, 0.0), 0.3);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 2, [](std::size_t i) {
                 if (i == 7) throw DomainError("boom");
               }),
               DomainError);
}
