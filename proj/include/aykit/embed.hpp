#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aykit/mc.hpp"
#include "aykit/measure.hpp"
#include "aykit/path.hpp"
#include "aykit/profile.hpp"

namespace aykit {

// Azema-Yor stopping rule for a centered atomic mu. psi_fires is the
// barycentre form psi(X) <= Xbar; w_fires the drawdown form X <= w(Xbar),
// evaluated through the thresholds psi_i = barycentre level of atom i.
class AyRule {
 public:
  explicit AyRule(const AtomicMeasure& mu);

  const AtomicMeasure& measure() const { return mu_; }
  bool psi_fires(double x, double xbar) const { return mu_.barycentre(x) <= xbar; }
  // Index k with psi_k <= xbar < psi_{k+1}, advanced from a previous value.
  std::size_t level_index(double xbar, std::size_t from = 0) const;
  bool w_fires(double x, std::size_t level) const {
    return level + 1 >= levels_.size() || x <= mu_.atoms()[level].x;
  }
  const std::vector<double>& levels() const { return levels_; }

 private:
  AtomicMeasure mu_;
  std::vector<double> levels_;
};

struct AyStop {
  StopEvent event;                      // psi rule; horizon_censored if it never fires
  std::optional<std::size_t> w_index;   // first index of the w rule
  bool consistent() const { return w_index ? *w_index == event.index : event.kind == StopKind::horizon_censored; }
};

AyStop ay_stopping_index(const Path& p, const AtomicMeasure& mu);

struct EmbedOptions {
  RunOptions run;
  double tv_budget = 0.02;
};

// Brownian paths stopped by the AY rule: TV of the stopped values against mu
// and KS of the stopped maxima (clamped at the top atom) against mu^HL.
McReport embed_report(const AtomicMeasure& mu, const GenSpec& spec, std::size_t n,
                      const EmbedOptions& opt = {});

struct AltRule {
  enum class Kind { ay, exit_interval, randomized_exit, fixed_time };
  Kind kind = Kind::exit_interval;
  double time = 0.0;  // fixed_time only

  static AltRule from_string(const std::string& name, double time = 0.0);
  std::string name() const;
};

// Maximum tail of an alternative embedding against the HL tail, with the AY
// rule run on the same Brownian paths as the attaining reference.
McReport dominance_report(const AltRule& rule, const AtomicMeasure& mu, const GenSpec& spec, std::size_t n,
                          const EmbedOptions& opt = {}, std::size_t levels = 100);

// Increasing floor g with its concave envelope U on [a, inf).
class FloorFunction {
 public:
  enum class Kind { power, shifted_power, linear };

  // scale * x^(1-g)/(1-g); already concave.
  static FloorFunction power(double gamma, double scale = 1.0);
  // scale * ((x - shift)^+)^(1-g)/(1-g); envelope is tangent from the origin.
  static FloorFunction shifted_power(double gamma, double shift, double scale = 1.0);
  static FloorFunction linear(double slope = 1.0);

  double operator()(double x) const;
  Kind kind() const { return kind_; }
  // Throws DomainError unless U is finite and U(x)/x -> 0.
  ProfilePtr envelope(double a) const;
  nlohmann::json tag() const;

 private:
  Kind kind_ = Kind::power;
  double gamma_ = 0.5;
  double shift_ = 0.0;
  double scale_ = 1.0;
};

struct FloorAlternative {
  enum class Kind { noisy_terminal, driver };
  Kind kind = Kind::noisy_terminal;
  double noise = 0.5;  // P_inf = M_inf +- noise

  static FloorAlternative from_string(const std::string& name, double noise = 0.5);
  std::string name() const;
};

McReport floor_report(const FloorFunction& g, const GenSpec& spec, std::size_t n,
                      const FloorAlternative& alt = {}, const std::vector<double>& caps = {0.5, 1.0, 2.0, 4.0},
                      const RunOptions& opt = {});

}  // namespace aykit
