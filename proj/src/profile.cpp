#include "aykit/profile.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "aykit/error.hpp"
#include "aykit/transform.hpp"

namespace aykit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double integrate(const std::function<double(double)>& f, double lo, double hi) {
  if (lo == hi) return 0.0;
  if (hi < lo) return -integrate(f, hi, lo);
  using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
  if (!std::isfinite(hi)) return gk::integrate(f, lo, hi, 20, 1e-14);
  // Map to [0, 1]: the error floor of the estimate scales with the abscissae,
  // so short intervals away from 0 would otherwise never converge.
  const double len = hi - lo;
  auto g = [&](double t) { return len * f(lo + len * t); };
  return gk::integrate(g, 0.0, 1.0, 20, 1e-14);
}

// Splits [lo, hi] at the given points so that integrands with jumps are only
// ever integrated over smooth pieces.
double integrate_pieces(const std::function<double(double)>& f, double lo, double hi,
                        const std::vector<double>& breaks) {
  if (hi < lo) return -integrate_pieces(f, hi, lo, breaks);
  double total = 0.0, left = lo;
  for (double b : breaks) {
    if (b <= left) continue;
    if (b >= hi) break;
    total += integrate(f, left, b);
    left = b;
  }
  return total + integrate(f, left, hi);
}

// Solves f(y) = target for nondecreasing f on [lo, limit), expanding the
// bracket geometrically from lo.
double invert(const std::function<double(double)>& f, double target, double lo, double limit) {
  double flo = f(lo);
  if (flo >= target) return lo;
  double step = std::max(1.0, std::abs(lo)) * 0.5;
  double hi = lo + step;
  while (true) {
    if (std::isfinite(limit) && hi >= limit) hi = std::nextafter(limit, lo);
    const double fhi = f(hi);
    if (fhi >= target) break;
    if (std::isfinite(limit) && hi >= std::nextafter(limit, lo)) return hi;
    lo = hi;
    step *= 2.0;
    hi = lo + step;
    if (!std::isfinite(hi)) throw DomainError("inversion bracket diverged");
  }
  std::uintmax_t iters = 200;
  auto g = [&](double y) { return f(y) - target; };
  auto r = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                             iters);
  return 0.5 * (r.first + r.second);
}

bool near(double x, double y) { return std::abs(x - y) <= 1e-10 * (1.0 + std::abs(y)); }

class IdentityProfile final : public Profile {
 public:
  explicit IdentityProfile(double a) : a_(a) {}
  double a() const override { return a_; }
  double U(double x) const override { return x; }
  double u(double) const override { return 1.0; }
  double V(double y) const override { return y; }
  double v(double) const override { return 1.0; }
  double w(double) const override { return 0.0; }
  nlohmann::json tag() const override { return {{"type", "identity"}, {"a", a_}}; }

 private:
  double a_;
};

class AffineProfile final : public Profile {
 public:
  AffineProfile(double alpha, double beta, double a) : alpha_(alpha), beta_(beta), a_(a) {
    if (!(beta > 0.0)) throw ValidationError("affine profile needs a positive slope");
  }
  double a() const override { return a_; }
  double U(double x) const override { return alpha_ + beta_ * x; }
  double u(double) const override { return beta_; }
  double V(double y) const override { return (y - alpha_) / beta_; }
  double v(double) const override { return 1.0 / beta_; }
  double w(double) const override { return alpha_; }
  nlohmann::json tag() const override {
    return {{"type", "affine"}, {"alpha", alpha_}, {"beta", beta_}, {"a", a_}};
  }

 private:
  double alpha_, beta_, a_;
};

class PowerProfile final : public Profile {
 public:
  PowerProfile(double gamma, double a, double scale) : g_(gamma), a_(a), k_(scale) {
    if (!(gamma > 0.0) || gamma > 1.0) throw ValidationError("power profile needs gamma in (0,1]");
    if (!(a > 0.0) || !(scale > 0.0)) throw ValidationError("power profile needs a, scale > 0");
  }
  double a() const override { return a_; }
  double U(double x) const override {
    check(x);
    return g_ == 1.0 ? k_ * std::log(x) : k_ * std::pow(x, 1.0 - g_) / (1.0 - g_);
  }
  double u(double x) const override {
    check(x);
    return g_ == 1.0 ? k_ / x : k_ * std::pow(x, -g_);
  }
  double V(double y) const override {
    if (g_ == 1.0) return std::exp(y / k_);
    if (y < 0.0) throw DomainError("power profile inverse needs y >= 0");
    return std::pow((1.0 - g_) * y / k_, 1.0 / (1.0 - g_));
  }
  double w(double y) const override { return g_ == 1.0 ? y - k_ : g_ * y; }
  nlohmann::json tag() const override {
    return {{"type", "power"}, {"gamma", g_}, {"a", a_}, {"scale", k_}};
  }

 private:
  static void check(double x) {
    if (!(x > 0.0)) throw DomainError("power profile needs x > 0");
  }
  double g_, a_, k_;
};

nlohmann::json measure_tag(const AtomicMeasure& mu) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({{"x", a.x}, {"p", a.p}});
  return {{"type", "atoms"}, {"atoms", atoms}};
}

class MeasureProfile final : public Profile {
 public:
  explicit MeasureProfile(const AtomicMeasure& mu) : mu_(mu), hl_(hl_transform(mu)) {}
  double a() const override { return 1.0; }
  double U(double x) const override {
    if (x < 1.0) throw DomainError("measure profile is defined on [1, b]");
    if (x >= mu_.hl_barrier()) return mu_.upper();
    return mu_.avar(1.0 / x);
  }
  double u(double x) const override {
    if (x < 1.0) throw DomainError("measure profile is defined on [1, b]");
    if (x >= mu_.hl_barrier()) return 0.0;
    return std::max(0.0, (U(x) - mu_.tail_quantile(1.0 / x)) / x);
  }
  double V(double y) const override {
    check(y);
    if (y >= mu_.upper()) return mu_.hl_barrier();
    return 1.0 / hl_.tail(y);
  }
  double w(double y) const override {
    check(y);
    if (y >= mu_.upper()) return y;
    return mu_.tail_quantile(hl_.tail(y));
  }
  std::optional<double> barrier() const override { return mu_.hl_barrier(); }
  double value_at_barrier() const override { return mu_.upper(); }
  nlohmann::json tag() const override { return {{"type", "measure"}, {"measure", measure_tag(mu_)}}; }

 private:
  void check(double y) const {
    if (y < mu_.mean() - 1e-12 * (1.0 + std::abs(mu_.mean()))) {
      throw DomainError("measure profile inverse is defined from the mean on");
    }
  }
  AtomicMeasure mu_;
  QuantileProfile hl_;
};

class ComposedProfile final : public Profile {
 public:
  ComposedProfile(ProfilePtr outer, ProfilePtr inner) : o_(std::move(outer)), i_(std::move(inner)) {
    if (!near(o_->a(), i_->a_star())) {
      throw ValidationError("outer profile must start at the inner profile's a*");
    }
    std::optional<double> b = i_->barrier();
    if (auto ob = o_->barrier()) {
      const double via = i_->V(*ob);
      b = b ? std::min(*b, via) : via;
    }
    b_ = b;
  }
  double a() const override { return i_->a(); }
  double U(double x) const override { return o_->U(i_->U(x)); }
  double u(double x) const override { return o_->u(i_->U(x)) * i_->u(x); }
  double V(double y) const override { return i_->V(o_->V(y)); }
  double v(double y) const override { return i_->v(o_->V(y)) * o_->v(y); }
  std::optional<double> barrier() const override { return b_; }
  nlohmann::json tag() const override {
    return {{"type", "compose"}, {"outer", o_->tag()}, {"inner", i_->tag()}};
  }

 private:
  ProfilePtr o_, i_;
  std::optional<double> b_;
};

class InverseProfile final : public Profile {
 public:
  explicit InverseProfile(ProfilePtr p) : p_(std::move(p)) {}
  double a() const override { return p_->a_star(); }
  double U(double x) const override { return p_->V(x); }
  double u(double x) const override { return p_->v(x); }
  double V(double y) const override { return p_->U(y); }
  double v(double y) const override { return p_->u(y); }
  std::optional<double> barrier() const override {
    if (!p_->barrier()) return std::nullopt;
    const double r = p_->value_at_barrier();
    if (!std::isfinite(r)) return std::nullopt;
    return r;
  }
  double value_at_barrier() const override {
    return p_->barrier() ? *p_->barrier() : kInf;
  }
  nlohmann::json tag() const override { return {{"type", "inverse"}, {"of", p_->tag()}}; }

 private:
  ProfilePtr p_;
};

// V(y) = a + int_{a*}^y ds/phi(s), U its inverse.
class BachelierProfile final : public Profile {
 public:
  BachelierProfile(const Coefficient& phi, double a, double a_star)
      : phi_(phi), a_(a), as_(a_star) {
    if (phi_.kind() == Coefficient::Kind::monomial && !(a_star > 0.0)) {
      throw ValidationError("monomial coefficient needs a* > 0");
    }
    checked_phi(a_star);
    if (phi_.kind() == Coefficient::Kind::monomial && phi_.k() > 1.0) {
      const double e = 1.0 - phi_.k();
      b_ = a_ + std::pow(as_, e) / (phi_.c() * -e);
    }
  }
  double a() const override { return a_; }
  double U(double x) const override {
    if (x < a_ - 1e-12 * (1.0 + std::abs(a_))) throw DomainError("U evaluated below a");
    if (b_ && x >= *b_) return kInf;
    const double d = x - a_;
    switch (phi_.kind()) {
      case Coefficient::Kind::constant:
        return as_ + phi_.c() * d;
      case Coefficient::Kind::monomial: {
        const double e = 1.0 - phi_.k(), c = phi_.c();
        if (e == 0.0) return as_ * std::exp(c * d);
        return std::pow(std::pow(as_, e) + c * e * d, 1.0 / e);
      }
      case Coefficient::Kind::rational: {
        // y + y^3/3 = s has the single real root t = A - 1/A.
        const double s = d + as_ + as_ * as_ * as_ / 3.0;
        const double h = 1.5 * std::abs(s);
        const double A = std::cbrt(h + std::sqrt(h * h + 1.0));
        double y = std::copysign(A - 1.0 / A, s);
        y -= (y + y * y * y / 3.0 - s) / (1.0 + y * y);
        return y;
      }
      case Coefficient::Kind::custom:
        return invert([this](double y) { return V(y); }, x, as_, kInf);
    }
    return kInf;
  }
  double u(double x) const override { return checked_phi(U(x)); }
  double V(double y) const override {
    const double d = y - as_;
    switch (phi_.kind()) {
      case Coefficient::Kind::constant:
        return a_ + d / phi_.c();
      case Coefficient::Kind::monomial: {
        const double e = 1.0 - phi_.k(), c = phi_.c();
        if (e == 0.0) return a_ + std::log(y / as_) / c;
        return a_ + (std::pow(y, e) - std::pow(as_, e)) / (c * e);
      }
      case Coefficient::Kind::rational:
        return a_ + d + (y * y * y - as_ * as_ * as_) / 3.0;
      case Coefficient::Kind::custom:
        return a_ + integrate([this](double s) { return 1.0 / checked_phi(s); }, as_, y);
    }
    return kInf;
  }
  double v(double y) const override { return 1.0 / checked_phi(y); }
  std::optional<double> barrier() const override { return b_; }
  double value_at_barrier() const override { return kInf; }
  nlohmann::json tag() const override {
    return {{"type", "bachelier"}, {"phi", phi_.tag()}, {"a", a_}, {"a_star", as_}};
  }

 private:
  double checked_phi(double y) const {
    const double p = phi_(y);
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw ValidationError("invalid coefficient: phi(" + std::to_string(y) + ") is not positive");
    }
    return p;
  }
  Coefficient phi_;
  double a_, as_;
  std::optional<double> b_;
};

// V(y) = a exp(int_{a*}^y du/(u - w(u))) below r_w.
class DrawdownProfile final : public Profile {
 public:
  DrawdownProfile(const DrawdownFunction& w, double a, double a_star) : w_(w), a_(a), as_(a_star) {
    if (!(a > 0.0)) throw DomainError("drawdown profile needs a > 0");
    if (w_.level() && !(*w_.level() > a_star)) {
      throw ValidationError("drawdown level must exceed a*");
    }
    gap(a_star);
    if (w_.kind() != DrawdownFunction::Kind::linear) {
      knots_.push_back(as_);
      logs_.push_back(0.0);
      for (double y : w_.breakpoints()) {
        if (y <= as_ || (w_.level() && y >= *w_.level())) continue;
        logs_.push_back(logs_.back() + integrate(integrand(), knots_.back(), y));
        knots_.push_back(y);
      }
    }
    if (auto r = w_.level()) {
      const double j = J(*r);
      if (std::isfinite(j) && j < 700.0) b_ = a_ * std::exp(j);
    }
  }
  double a() const override { return a_; }
  double U(double x) const override {
    if (x < a_ * (1.0 - 1e-12)) throw DomainError("U evaluated below a");
    if (b_ && x >= *b_) return *w_.level();
    const double target = std::log(x / a_);
    if (w_.kind() == DrawdownFunction::Kind::linear) {
      const double g = w_.gamma(), s = w_.shift();
      double y;
      if (g == 1.0) {
        y = as_ + s * target;
      } else {
        const double base = (1.0 - g) * as_ + s;
        y = (base * std::exp((1.0 - g) * target) - s) / (1.0 - g);
      }
      return w_.level() ? std::min(y, *w_.level()) : y;
    }
    if (target <= 0.0) return as_;
    const double limit = w_.level() ? *w_.level() : kInf;
    // Start from the last knot below the target to keep quadratures short.
    auto it = std::upper_bound(logs_.begin(), logs_.end(), target);
    const double lo = knots_[static_cast<std::size_t>(it - logs_.begin()) - 1];
    return invert([this](double y) { return J(y); }, target, lo, limit);
  }
  double u(double x) const override {
    if (b_ && x >= *b_) return 0.0;
    const double y = U(x);
    return std::max(0.0, gap(y)) / x;
  }
  double V(double y) const override {
    if (w_.level() && y >= *w_.level()) return b_ ? *b_ : kInf;
    return a_ * std::exp(J(y));
  }
  double v(double y) const override { return V(y) / gap(y); }
  double w(double y) const override { return w_(y); }
  std::optional<double> barrier() const override { return b_; }
  double value_at_barrier() const override { return w_.level() ? *w_.level() : kInf; }
  nlohmann::json tag() const override {
    return {{"type", "drawdown"}, {"w", w_.tag()}, {"a", a_}, {"a_star", as_}};
  }

 private:
  double gap(double y) const {
    const double g = y - w_(y);
    const bool at_level = w_.level() && y >= *w_.level() - 1e-12 * (1.0 + std::abs(*w_.level()));
    if (!(g > 0.0) && !at_level) {
      throw ValidationError("invalid drawdown function: w(" + std::to_string(y) + ") >= y");
    }
    return g;
  }
  std::function<double(double)> integrand() const {
    return [this](double u) { return 1.0 / gap(u); };
  }
  double J(double y) const {
    if (w_.kind() == DrawdownFunction::Kind::linear) {
      const double g = w_.gamma(), s = w_.shift();
      if (g == 1.0) return (y - as_) / s;
      return std::log(((1.0 - g) * y + s) / ((1.0 - g) * as_ + s)) / (1.0 - g);
    }
    if (y <= as_) return -integrate(integrand(), y, as_);
    auto it = std::upper_bound(knots_.begin(), knots_.end(), y);
    const auto k = static_cast<std::size_t>(it - knots_.begin()) - 1;
    return logs_[k] + integrate(integrand(), knots_[k], y);
  }
  DrawdownFunction w_;
  double a_, as_;
  std::vector<double> knots_, logs_;
  std::optional<double> b_;
};

// U(x) = x int_x^inf h(s)/s^2 ds.
class HProfile final : public Profile {
 public:
  explicit HProfile(HFunction h) : h_(std::move(h)) {
    if (!(h_.x0 > 0.0)) throw ValidationError("h needs a positive left end x0");
    if (!h_.constant_from) {
      const double rho = h_.growth ? *h_.growth : estimate_growth();
      rho_ = std::clamp(rho, 0.0, 0.95);
      if (!(rho < 1.0)) {
        throw IntegrabilityError("integral of h(s)/s^2 diverges (growth exponent " +
                                 std::to_string(rho) + ")");
      }
    }
    std::sort(h_.jumps.begin(), h_.jumps.end());
  }
  double a() const override { return h_.x0; }
  double U(double x) const override {
    if (x < h_.x0 * (1.0 - 1e-12)) throw DomainError("U evaluated below x0");
    auto f = [this](double s) { return h_.h(s) / (s * s); };
    if (auto b = h_.constant_from) {
      if (x >= *b) return h_.h(*b);
      return x * (integrate_pieces(f, x, *b, h_.jumps) + h_.h(*b) / *b);
    }
    double total = 0.0, left = x;
    for (double j : h_.jumps) {
      if (j <= left) continue;
      total += integrate(f, left, j);
      left = j;
    }
    total += tail_integral(left);
    if (!std::isfinite(total)) throw IntegrabilityError("integral of h(s)/s^2 diverges");
    return x * total;
  }
  double u(double x) const override {
    if (h_.constant_from && x >= *h_.constant_from) return 0.0;
    return std::max(0.0, (U(x) - h_.h(x)) / x);
  }
  double V(double y) const override {
    const double limit = h_.constant_from ? *h_.constant_from : kInf;
    if (h_.constant_from && y >= U(limit)) return limit;
    return invert([this](double x) { return U(x); }, y, h_.x0, limit);
  }
  double w(double y) const override {
    if (h_.constant_from && y >= U(*h_.constant_from)) return y;
    return h_.h(V(y));
  }
  std::optional<double> barrier() const override { return h_.constant_from; }
  nlohmann::json tag() const override { return {{"type", "from_h"}, {"h", h_.description}}; }

 private:
  double estimate_growth() const {
    const double s1 = h_.x0 * 1e8, s2 = h_.x0 * 1e16;
    const double h1 = std::abs(h_.h(s1)), h2 = std::abs(h_.h(s2));
    if (!std::isfinite(h1) || !std::isfinite(h2)) return kInf;
    if (h2 <= h1 || h1 == 0.0) return 0.0;
    return std::log(h2 / h1) / std::log(s2 / s1);
  }
  // int_L^inf h(s)/s^2 ds after s = L t^-m with m = 1/(1-rho), which turns
  // h ~ s^rho into a bounded integrand on (0, 1].
  double tail_integral(double L) const {
    const double m = 1.0 / (1.0 - rho_);
    auto g = [this, L, m](double t) {
      const double s = L * std::pow(t, -m);
      if (!std::isfinite(s)) return 0.0;
      return m * h_.h(s) * std::pow(t, m - 1.0) / L;
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(g, 0.0, 1.0, 1e-13);
  }
  HFunction h_;
  double rho_ = 0.0;
};

}  // namespace

double Profile::w(double y) const {
  if (y >= value_at_barrier()) return y;
  return y - V(y) / v(y);
}

double Profile::value_at_barrier() const {
  if (auto b = barrier()) return U(*b);
  return kInf;
}

Coefficient Coefficient::constant(double c) {
  if (!(c > 0.0)) throw ValidationError("invalid coefficient: constant must be positive");
  Coefficient r;
  r.kind_ = Kind::constant;
  r.c_ = c;
  return r;
}

Coefficient Coefficient::monomial(double c, double k) {
  if (!(c > 0.0)) throw ValidationError("invalid coefficient: monomial needs c > 0");
  Coefficient r;
  r.kind_ = Kind::monomial;
  r.c_ = c;
  r.k_ = k;
  return r;
}

Coefficient Coefficient::power_example(double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0)) throw ValidationError("gamma must lie in (0,1)");
  const double e = -gamma / (1.0 - gamma);
  return monomial(std::pow(1.0 - gamma, e), e);
}

Coefficient Coefficient::rational() {
  Coefficient r;
  r.kind_ = Kind::rational;
  return r;
}

Coefficient Coefficient::custom(std::function<double(double)> phi, std::string label) {
  Coefficient r;
  r.kind_ = Kind::custom;
  r.fn_ = std::move(phi);
  r.label_ = std::move(label);
  return r;
}

double Coefficient::operator()(double y) const {
  switch (kind_) {
    case Kind::constant:
      return c_;
    case Kind::monomial:
      return y > 0.0 ? c_ * std::pow(y, k_) : std::numeric_limits<double>::quiet_NaN();
    case Kind::rational:
      return 1.0 / (1.0 + y * y);
    case Kind::custom:
      return fn_(y);
  }
  return 0.0;
}

nlohmann::json Coefficient::tag() const {
  switch (kind_) {
    case Kind::constant:
      return {{"type", "constant"}, {"c", c_}};
    case Kind::monomial:
      return {{"type", "monomial"}, {"c", c_}, {"k", k_}};
    case Kind::rational:
      return {{"type", "rational"}};
    case Kind::custom:
      return {{"type", "custom"}, {"label", label_}};
  }
  return {};
}

DrawdownFunction DrawdownFunction::linear(double gamma, double shift, std::optional<double> level) {
  if (gamma > 1.0 || (gamma == 1.0 && !(shift > 0.0))) {
    throw ValidationError("invalid drawdown function: linear w needs gamma < 1 or a positive shift");
  }
  DrawdownFunction r;
  r.kind_ = Kind::linear;
  r.gamma_ = gamma;
  r.shift_ = shift;
  r.level_ = level;
  return r;
}

DrawdownFunction DrawdownFunction::from_measure(const AtomicMeasure& mu) {
  DrawdownFunction r;
  r.kind_ = Kind::measure;
  r.level_ = mu.upper();
  for (std::size_t i = 0; i + 1 < mu.size(); ++i) {
    r.breakpoints_.push_back(mu.suffix_moment(i) / mu.suffix_mass(i));
  }
  auto prof = std::make_shared<MeasureProfile>(mu);
  r.fn_ = [prof](double y) { return prof->w(y); };
  r.measure_ = mu;
  return r;
}

DrawdownFunction DrawdownFunction::custom(std::function<double(double)> w,
                                          std::optional<double> level,
                                          std::vector<double> breakpoints, std::string label) {
  DrawdownFunction r;
  r.kind_ = Kind::custom;
  r.fn_ = std::move(w);
  r.level_ = level;
  r.breakpoints_ = std::move(breakpoints);
  std::sort(r.breakpoints_.begin(), r.breakpoints_.end());
  r.label_ = std::move(label);
  return r;
}

double DrawdownFunction::operator()(double y) const {
  if (level_ && y >= *level_) return y;
  if (kind_ == Kind::linear) return gamma_ * y - shift_;
  return fn_(y);
}

nlohmann::json DrawdownFunction::tag() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::linear:
      j = {{"type", "linear"}, {"gamma", gamma_}, {"shift", shift_}};
      break;
    case Kind::measure:
      j = {{"type", "measure"}, {"measure", measure_tag(*measure_)}};
      break;
    case Kind::custom:
      j = {{"type", "custom"}, {"label", label_}};
      break;
  }
  if (level_ && kind_ != Kind::measure) j["level"] = *level_;
  return j;
}

ProfilePtr identity_profile(double a) { return std::make_shared<IdentityProfile>(a); }
ProfilePtr affine_profile(double alpha, double beta, double a) {
  return std::make_shared<AffineProfile>(alpha, beta, a);
}
ProfilePtr power_profile(double gamma, double a, double scale) {
  return std::make_shared<PowerProfile>(gamma, a, scale);
}
ProfilePtr profile_from_measure(const AtomicMeasure& mu) { return std::make_shared<MeasureProfile>(mu); }
ProfilePtr compose(ProfilePtr outer, ProfilePtr inner) {
  return std::make_shared<ComposedProfile>(std::move(outer), std::move(inner));
}
ProfilePtr inverse(ProfilePtr p) { return std::make_shared<InverseProfile>(std::move(p)); }
ProfilePtr bachelier_profile(const Coefficient& phi, double a, double a_star) {
  return std::make_shared<BachelierProfile>(phi, a, a_star);
}
ProfilePtr v_from_w(const DrawdownFunction& w, double a, double a_star) {
  return std::make_shared<DrawdownProfile>(w, a, a_star);
}
ProfilePtr u_from_h(const HFunction& h) { return std::make_shared<HProfile>(h); }

}  // namespace aykit
