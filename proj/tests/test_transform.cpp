#include <gtest/gtest.h>

#include "aykit/error.hpp"
#include "aykit/profile.hpp"
#include "aykit/transform.hpp"
#include "support.hpp"

using namespace aykit;
namespace ts = testing_support;

namespace {

// P(AVaR(xi) >= y) by bisection on the brute-force AVaR, which is nonincreasing.
double hl_tail_bisect(const AtomicMeasure& mu, double y) {
  if (y <= mu.mean()) return 1.0;
  if (y > mu.upper()) return 0.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ts::avar(mu, mid) >= y ? lo : hi) = mid;
  }
  return lo;
}

AtomicMeasure two_point() { return AtomicMeasure({{-1.0, 0.5}, {1.0, 0.5}}); }

}  // namespace

TEST(HlTransform, TwoPointTail) {
  const auto hl = hl_transform(two_point());
  for (double y : {0.0, 0.25, 0.5, 0.9}) EXPECT_NEAR(hl.tail(y), 1.0 / (1.0 + y), 1e-12) << y;
  EXPECT_NEAR(hl.tail(1.0), 0.5, 1e-15);
  EXPECT_EQ(hl.tail(1.0 + 1e-9), 0.0);
  EXPECT_EQ(hl.tail(-0.1), 1.0);
  EXPECT_NEAR(hl.lower(), 0.0, 1e-15);
  EXPECT_EQ(hl.upper(), 1.0);
}

TEST(HlTransform, QuantileIsAvar) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lam(1e-6, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mu = ts::random_measure(rng, 1 + trial % 8);
    const auto hl = hl_transform(mu);
    for (int k = 0; k < 20; ++k) {
      const double l = lam(rng);
      EXPECT_NEAR(hl.tail_quantile(l), ts::avar(mu, l), 1e-10);
    }
    EXPECT_NEAR(hl.lower(), mu.mean(), 1e-12);
    EXPECT_EQ(hl.upper(), mu.upper());
  }
}

TEST(HlTransform, TailMatchesBisectionAndDual) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mu = ts::random_measure(rng, 2 + trial % 7);
    const auto hl = hl_transform(mu);
    std::uniform_real_distribution<double> ys(mu.mean(), mu.upper());
    for (int k = 0; k < 20; ++k) {
      const double y = ys(rng);
      if (!(y > mu.mean() && y < mu.upper())) continue;
      EXPECT_NEAR(hl.tail(y), hl_tail_bisect(mu, y), 1e-9);
      EXPECT_NEAR(hl_tail_dual(mu, y), hl.tail(y), 1e-8);
    }
  }
}

TEST(HlTransform, DualRejectsOutsideSupport) {
  EXPECT_THROW(hl_tail_dual(two_point(), 0.0), DomainError);
  EXPECT_THROW(hl_tail_dual(two_point(), 1.0), DomainError);
}

TEST(HlTransform, BarycentreAtBreakpoints) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mu = ts::random_measure(rng, 2 + trial % 7);
    const auto w = DrawdownFunction::from_measure(mu);
    const auto hl = hl_transform(mu);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double x = mu.atoms()[i].x;
      const double psi = ts::barycentre(mu, x);
      // psi(x_i) = AVaR(mu([x_i, inf)))
      EXPECT_NEAR(mu.avar(mu.suffix_mass(i)), psi, 1e-12);
      // w = psi^-1 = q o tail_HL, evaluated at its jump points
      if (x < mu.upper()) {
        EXPECT_NEAR(w(psi), x, 1e-12);
        EXPECT_NEAR(w(psi), ts::tail_quantile(mu, hl.tail(psi)), 1e-12);
      }
    }
  }
}

TEST(PowerProfile, HalfExample) {
  const auto p = power_profile(0.5, 1.0);
  EXPECT_DOUBLE_EQ(p->U(4.0), 4.0);
  EXPECT_DOUBLE_EQ(p->u(4.0), 0.5);
  EXPECT_DOUBLE_EQ(p->V(4.0), 4.0);
  EXPECT_DOUBLE_EQ(p->w(6.0), 3.0);
  EXPECT_DOUBLE_EQ(p->a_star(), 2.0);
  const auto lg = power_profile(1.0, 1.0, 2.0);
  EXPECT_NEAR(lg->U(std::exp(1.0)), 2.0, 1e-15);
}

TEST(DrawdownProfile, LinearHalfIsPower) {
  const auto p = v_from_w(DrawdownFunction::linear(0.5), 1.0, 2.0);
  const auto q = power_profile(0.5, 1.0);
  for (double x : {1.0, 1.7, 4.0, 25.0, 1e6}) {
    EXPECT_NEAR(p->U(x), q->U(x), 1e-12 * q->U(x));
    EXPECT_NEAR(p->u(x), q->u(x), 1e-12);
  }
  for (double y : {2.0, 3.0, 10.0}) {
    EXPECT_NEAR(p->V(y), y * y / 4.0, 1e-12 * y * y);
    EXPECT_NEAR(p->w(y), y / 2.0, 1e-12 * y);
  }
}

TEST(DrawdownProfile, ZeroDrawdownIsIdentity) {
  const auto p = v_from_w(DrawdownFunction::zero(), 1.5, 1.5);
  for (double x : {1.5, 2.0, 10.0}) EXPECT_NEAR(p->U(x), x, 1e-12 * x);
}

TEST(DrawdownProfile, CustomQuadratureMatchesClosedForm) {
  const auto w = DrawdownFunction::custom([](double y) { return 0.5 * y; }, std::nullopt);
  const auto p = v_from_w(w, 1.0, 2.0);
  for (double y : {2.0, 2.5, 7.0}) EXPECT_NEAR(p->V(y), y * y / 4.0, 1e-10 * y * y);
  EXPECT_NEAR(p->U(9.0), 6.0, 1e-9);
}

TEST(DrawdownProfile, LevelGivesBarrier) {
  // w(y) = y/2 below 4: V(4-) = 4, so b = 4 and U(b) = 4.
  const auto p = v_from_w(DrawdownFunction::linear(0.5, 0.0, 4.0), 1.0, 2.0);
  ASSERT_TRUE(p->barrier());
  EXPECT_NEAR(*p->barrier(), 4.0, 1e-12);
  EXPECT_NEAR(p->value_at_barrier(), 4.0, 1e-12);
}

TEST(MeasureProfile, InverseTailRoundTrip) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = ts::random_measure(rng, 2 + trial % 6);
    const auto p = profile_from_measure(mu);
    const auto hl = hl_transform(mu);
    std::uniform_real_distribution<double> ys(mu.mean(), mu.upper());
    for (int k = 0; k < 20; ++k) {
      const double y = ys(rng);
      EXPECT_NEAR(1.0 / p->V(y), hl.tail(y), 1e-12);
      EXPECT_NEAR(p->U(p->V(y)), y, 1e-9 * (1.0 + std::abs(y)));
    }
    EXPECT_NEAR(p->a_star(), mu.mean(), 1e-12);
    EXPECT_NEAR(p->U(2.0), mu.avar(0.5), 1e-12);
  }
}

TEST(BachelierProfile, ConstantIsAffine) {
  const auto p = bachelier_profile(Coefficient::constant(2.0), 0.0, 3.0);
  EXPECT_DOUBLE_EQ(p->U(1.5), 6.0);
  EXPECT_DOUBLE_EQ(p->V(6.0), 1.5);
}

TEST(BachelierProfile, PowerExample) {
  // phi(y) = 2/y from a = a* = 1: V(y) = 1 + (y^2 - 1)/4.
  const auto p = bachelier_profile(Coefficient::power_example(0.5), 1.0, 1.0);
  for (double y : {1.0, 2.0, 5.0}) EXPECT_NEAR(p->V(y), 1.0 + (y * y - 1.0) / 4.0, 1e-12 * y * y);
  for (double x : {1.0, 3.0, 10.0}) EXPECT_NEAR(p->U(x), std::sqrt(4.0 * x - 3.0), 1e-12 * x);
}

TEST(BachelierProfile, RationalInverse) {
  const auto p = bachelier_profile(Coefficient::rational(), 0.0, 0.0);
  EXPECT_FALSE(p->barrier());
  for (double y : {-3.0, -0.2, 0.0, 0.7, 4.0, 40.0}) {
    EXPECT_NEAR(p->V(y), y + y * y * y / 3.0, 1e-12 * (1.0 + std::abs(y * y * y)));
  }
  for (double x : {0.0, 0.4, 5.0, 1000.0}) EXPECT_NEAR(p->V(p->U(x)), x, 1e-10 * (1.0 + x));
}

TEST(BachelierProfile, ExplosionBarrier) {
  // phi(y) = y^2 from a = 0, a* = 1: V(y) = 1 - 1/y, V(inf) = 1.
  const auto p = bachelier_profile(Coefficient::monomial(1.0, 2.0), 0.0, 1.0);
  ASSERT_TRUE(p->barrier());
  EXPECT_NEAR(*p->barrier(), 1.0, 1e-15);
  EXPECT_NEAR(p->U(0.5), 2.0, 1e-12);
  EXPECT_TRUE(std::isinf(p->value_at_barrier()));
}

TEST(BachelierProfile, CustomMatchesMonomial) {
  const auto c = bachelier_profile(Coefficient::custom([](double y) { return 2.0 / y; }), 1.0, 1.0);
  for (double x : {1.0, 2.0, 6.0}) EXPECT_NEAR(c->U(x), std::sqrt(4.0 * x - 3.0), 1e-9);
}

TEST(BachelierProfile, RejectsNonpositiveCoefficient) {
  EXPECT_THROW(Coefficient::constant(-1.0), ValidationError);
  const auto p = bachelier_profile(Coefficient::custom([](double y) { return y; }), 1.0, 1.0);
  EXPECT_THROW(p->V(-1.0), ValidationError);
}

TEST(HProfile, PowerH) {
  HFunction h;
  h.h = [](double x) { return std::sqrt(x); };
  h.x0 = 1.0;
  h.growth = 0.5;
  const auto p = u_from_h(h);
  for (double x : {1.0, 4.0, 9.0, 100.0}) EXPECT_NEAR(p->U(x), 2.0 * std::sqrt(x), 1e-9 * x);
}

TEST(HProfile, MeasureQuantileH) {
  const auto mu = two_point();
  HFunction h;
  h.h = [mu](double x) { return x >= mu.hl_barrier() ? mu.upper() : mu.tail_quantile(1.0 / x); };
  h.x0 = 1.0;
  h.constant_from = 2.0;
  h.jumps = {2.0};
  const auto p = u_from_h(h);
  EXPECT_NEAR(p->U(2.0), 1.0, 1e-12);
  for (double x : {1.0, 1.3, 1.9}) EXPECT_NEAR(p->U(x), mu.avar(1.0 / x), 1e-9);
}

TEST(HProfile, ConcaveAndSolvesOde) {
  HFunction h;
  h.h = [](double x) { return std::log(x) + std::pow(x, 0.3); };
  h.x0 = 1.0;
  h.growth = 0.3;
  const auto p = u_from_h(h);
  double prev_slope = std::numeric_limits<double>::infinity();
  for (double x = 1.0; x < 50.0; x *= 1.3) {
    const double d = 1e-4 * x;
    const double slope = (p->U(x + d) - p->U(x)) / d;
    EXPECT_LE(slope, prev_slope + 1e-6);
    prev_slope = slope;
    if (x == 1.0) continue;
    const double central = (p->U(x + d) - p->U(x - d)) / (2.0 * d);
    EXPECT_NEAR(p->U(x) - x * central, h.h(x), 1e-6 * (1.0 + x));
  }
}

TEST(HProfile, DivergentIntegralIsRejected) {
  HFunction h;
  h.h = [](double x) { return x; };
  h.x0 = 1.0;
  EXPECT_THROW(u_from_h(h), IntegrabilityError);
}

TEST(ComposeInverse, GroupStructure) {
  const auto outer = power_profile(0.5, 2.0);     // starts at a* of inner
  const auto inner = affine_profile(0.0, 2.0, 1.0); // U(x) = 2x from a = 1
  const auto c = compose(outer, inner);
  for (double x : {1.0, 2.0, 8.0}) EXPECT_NEAR(c->U(x), 2.0 * std::sqrt(2.0 * x), 1e-12 * x);
  const auto inv = inverse(outer);
  for (double y : {2.0 * std::sqrt(2.0), 5.0}) EXPECT_NEAR(inv->U(y), outer->V(y), 1e-12 * y);
  EXPECT_THROW(compose(power_profile(0.5, 5.0), inner), ValidationError);
}
