#pragma once

#include <functional>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aykit/measure.hpp"

namespace aykit {

// The data behind an Azema-Yor transform: a nondecreasing U on [a, b] with
// right derivative u, its inverse V on [U(a), U(b)], v = 1/u(V) and the
// drawdown function w(y) = y - V(y)/v(y). An unset barrier means b = +inf.
class Profile {
 public:
  virtual ~Profile() = default;

  virtual double a() const = 0;
  virtual double U(double x) const = 0;
  virtual double u(double x) const = 0;
  virtual double V(double y) const = 0;
  virtual double v(double y) const { return 1.0 / u(V(y)); }
  virtual double w(double y) const;
  virtual std::optional<double> barrier() const { return std::nullopt; }
  // U(b); +inf for an unbounded barrier or an exploding U.
  virtual double value_at_barrier() const;
  // Parametric description, enough to rebuild the profile.
  virtual nlohmann::json tag() const = 0;

  double a_star() const { return U(a()); }
};

using ProfilePtr = std::shared_ptr<const Profile>;

// Coefficient phi of the Bachelier equation dY = phi(Ybar) dX.
class Coefficient {
 public:
  enum class Kind { constant, monomial, rational, custom };

  static Coefficient constant(double c);
  static Coefficient monomial(double c, double k);  // c * y^k, y > 0
  static Coefficient power_example(double gamma);   // ((1-g) y)^(-g/(1-g))
  static Coefficient rational();                    // 1 / (1 + y^2)
  static Coefficient custom(std::function<double(double)> phi, std::string label = "custom");

  double operator()(double y) const;
  Kind kind() const { return kind_; }
  double c() const { return c_; }
  double k() const { return k_; }
  nlohmann::json tag() const;

 private:
  Kind kind_ = Kind::constant;
  double c_ = 1.0;
  double k_ = 0.0;
  std::function<double(double)> fn_;
  std::string label_;
};

// Drawdown function: w(y) < y below the level r_w, w(y) = y from r_w on.
class DrawdownFunction {
 public:
  enum class Kind { linear, measure, custom };

  // w(y) = gamma*y - shift below the level.
  static DrawdownFunction linear(double gamma, double shift = 0.0,
                                 std::optional<double> level = std::nullopt);
  static DrawdownFunction zero(std::optional<double> level = std::nullopt) {
    return linear(0.0, 0.0, level);
  }
  // w_mu, the right-continuous inverse of the barycentre of mu.
  static DrawdownFunction from_measure(const AtomicMeasure& mu);
  static DrawdownFunction custom(std::function<double(double)> w, std::optional<double> level,
                                 std::vector<double> breakpoints = {},
                                 std::string label = "custom");

  double operator()(double y) const;
  Kind kind() const { return kind_; }
  std::optional<double> level() const { return level_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  double gamma() const { return gamma_; }
  double shift() const { return shift_; }
  const std::optional<AtomicMeasure>& measure() const { return measure_; }
  nlohmann::json tag() const;

 private:
  Kind kind_ = Kind::linear;
  double gamma_ = 0.0;
  double shift_ = 0.0;
  std::optional<double> level_;
  std::vector<double> breakpoints_;
  std::function<double(double)> fn_;
  std::optional<AtomicMeasure> measure_;
  std::string label_;
};

// Nondecreasing right-continuous h on [x0, inf) for the ODE U - x U' = h.
struct HFunction {
  std::function<double(double)> h;
  double x0 = 1.0;
  std::optional<double> constant_from;  // h constant on [b, inf)
  std::optional<double> growth;         // declared |h(s)| = O(s^growth)
  std::vector<double> jumps;            // discontinuities of h
  nlohmann::json description = {{"type", "custom"}};
};

ProfilePtr identity_profile(double a = 0.0);
ProfilePtr affine_profile(double alpha, double beta, double a = 0.0);
// U(x) = scale * x^(1-g)/(1-g) for g in (0,1); g = 1 gives scale * ln x.
ProfilePtr power_profile(double gamma, double a = 1.0, double scale = 1.0);
ProfilePtr profile_from_measure(const AtomicMeasure& mu);
// outer o inner; the outer start must equal inner's a*.
ProfilePtr compose(ProfilePtr outer, ProfilePtr inner);
// Swaps (U, u) with (V, v); the profile used to undo a transform.
ProfilePtr inverse(ProfilePtr p);
ProfilePtr bachelier_profile(const Coefficient& phi, double a, double a_star);
ProfilePtr v_from_w(const DrawdownFunction& w, double a, double a_star);
ProfilePtr u_from_h(const HFunction& h);

}  // namespace aykit
