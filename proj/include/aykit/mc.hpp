#pragma once

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aykit/path.hpp"
#include "aykit/profile.hpp"
#include "aykit/stats.hpp"

namespace aykit {

enum class GenKind {
  brownian,
  exp_martingale,
  bm_stopped_at_0,
  exit_interval,
  // dN = sigma * max(N, floor) dB, absorbed at 0: geometric away from 0,
  // arithmetic near it, so it reaches 0 in finite time.
  floored_gbm_stopped_at_0,
};

const char* to_string(GenKind kind);
GenKind gen_kind_from_string(const std::string& name);

struct GenSpec {
  GenKind kind = GenKind::brownian;
  double dt = 1e-3;
  double horizon = 1.0;
  double volatility = 1.0;
  double start = 0.0;
  std::uint64_t base_seed = 0;
  double upper = 0.0;  // b of exit_interval(0, b)
  double floor = 0.0;  // floored_gbm_stopped_at_0 only

  void validate() const;
  std::size_t steps() const { return static_cast<std::size_t>(std::llround(horizon / dt)); }
  bool nonnegative_martingale() const { return kind != GenKind::brownian; }
};

// Seed of stream (base, index, stream); path i always draws from stream 0 of
// index i, auxiliary randomness (rule choices, terminal noise) from stream 1.
std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index, std::uint64_t stream = 0);

// Incremental generator for one path; generate() and the reports are built on it.
class PathStepper {
 public:
  PathStepper(const GenSpec& spec, std::uint64_t index)
      : spec_(spec), engine_(stream_seed(spec.base_seed, index)), s_(spec.volatility * std::sqrt(spec.dt)) {
    x_ = spec.kind == GenKind::exp_martingale ? 0.0 : spec.start;
  }

  // exp_martingale keeps ln(N/N0) internally; value() exponentiates.
  double value() const { return spec_.kind == GenKind::exp_martingale ? spec_.start * std::exp(x_) : x_; }
  double log_value() const { return x_; }
  std::size_t index() const { return k_; }
  double time() const { return static_cast<double>(k_) * spec_.dt; }
  bool stopped() const { return stop_.has_value(); }
  std::optional<StopKind> stop_kind() const { return stop_; }

  void step() {
    if (stop_) return;
    const double z = normal_(engine_);
    ++k_;
    switch (spec_.kind) {
      case GenKind::brownian:
        x_ += s_ * z;
        break;
      case GenKind::exp_martingale:
        x_ += s_ * z - 0.5 * s_ * s_;
        break;
      case GenKind::bm_stopped_at_0:
        x_ += s_ * z;
        if (x_ <= 0.0) absorb(0.0, StopKind::hit_zero);
        break;
      case GenKind::exit_interval:
        x_ += s_ * z;
        if (x_ <= 0.0) absorb(0.0, StopKind::hit_zero);
        else if (x_ >= spec_.upper) absorb(spec_.upper, StopKind::hit_barrier);
        break;
      case GenKind::floored_gbm_stopped_at_0:
        x_ += s_ * std::max(x_, spec_.floor) * z;
        if (x_ <= 0.0) absorb(0.0, StopKind::hit_zero);
        break;
    }
  }

 private:
  void absorb(double level, StopKind kind) {
    x_ = level;
    stop_ = kind;
  }

  GenSpec spec_;
  boost::random::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
  double s_;
  double x_;
  std::size_t k_ = 0;
  std::optional<StopKind> stop_;
};

// Auxiliary uniform stream of path i.
class AuxStream {
 public:
  AuxStream(std::uint64_t base, std::uint64_t index, std::uint64_t stream = 1)
      : engine_(stream_seed(base, index, stream)) {}
  double uniform() { return u01_(engine_); }
  // In (0, 1], safe for logarithms.
  double uniform_open() { return 1.0 - u01_(engine_); }

 private:
  boost::random::mt19937_64 engine_;
  boost::random::uniform_01<double> u01_;
};

// Extremes of the Brownian bridge between consecutive grid values a -> b,
// variance s2 = sigma^2 dt per step. Draws are skipped when the event has
// probability below e^-20, which keeps the stream cheap away from levels.
class BridgeSampler {
 public:
  BridgeSampler(const GenSpec& spec, std::uint64_t index)
      : aux_(spec.base_seed, index, 2), s2_(spec.volatility * spec.volatility * spec.dt) {}

  // New running maximum after the step, given the maximum m before it.
  double update_max(double a, double b, double m) {
    m = std::max(m, b);
    if (2.0 * (m - a) * (m - b) >= 40.0 * s2_) return m;
    const double d = b - a;
    return std::max(m, 0.5 * (a + b + std::sqrt(d * d - 2.0 * s2_ * std::log(aux_.uniform_open()))));
  }
  bool crosses_above(double a, double b, double level) { return crosses(level - a, level - b); }
  bool crosses_below(double a, double b, double level) { return crosses(a - level, b - level); }

 private:
  // P(bridge reaches the level) = exp(-2 da db / s2) for distances da, db > 0.
  bool crosses(double da, double db) {
    if (da <= 0.0 || db <= 0.0) return true;
    const double e = 2.0 * da * db / s2_;
    if (e >= 40.0) return false;
    return aux_.uniform() < std::exp(-e);
  }
  AuxStream aux_;
  double s2_;
};

struct GeneratedPath {
  Path path;
  std::optional<StopEvent> event;
};

GeneratedPath generate(const GenSpec& spec, std::uint64_t index);

struct TableRow {
  double level;
  double empirical;
  double target;
  std::optional<double> reference;
  std::optional<double> ci;
};

struct McReport {
  std::string name;
  GenSpec spec;
  std::size_t n_paths = 0;
  std::optional<double> ks_stat;
  std::optional<double> tv_stat;
  double censored_fraction = 0.0;
  bool inconclusive = false;
  std::vector<TableRow> table;
  std::map<std::string, double> stats;
  std::map<std::string, std::string> notes;
  // Not serialized: the sample behind ks_stat and its target, for dumps and plots.
  std::vector<double> samples;
  std::optional<Cdf> target;
};

struct RunOptions {
  unsigned threads = 1;
  double censor_budget = 0.002;
  bool auto_extend = true;
  // Extension cap as a multiple of spec.horizon.
  double max_extension = 1000.0;
  // Brownian-type paths (brownian, and ln N for exp_martingale): sample the
  // exact bridge maximum inside each step and detect level crossings between
  // grid points, from a separate stream. Maxima are then continuous-time
  // suprema and stopped values sit on the crossed level.
  bool bridge_max = true;
};

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

// Law of N0/Nbar (uniform), or of Nbar at exit for exit_interval against (N0/xi) ^ b.
McReport uniform_law_report(const GenSpec& spec, std::size_t n, const RunOptions& opt = {});

// P(g_1 < t) for the last grid time g_1 with N >= 1, completed beyond the
// horizon with the conditional law P(no return above 1 | F_T) = (1 - N_T)^+.
McReport last_passage_report(const GenSpec& spec, std::size_t n, const std::vector<double>& t_list,
                             const RunOptions& opt = {});

// Drivers absorbed at 0 fed through the drawdown solution Y = M^U(N), U from w.
// Checks Y = w(Ybar) at breach and the law of Ybar against P(Ybar >= y) = N0/V(y).
McReport breach_law_report(const GenSpec& spec, const DrawdownFunction& w, double a_star, std::size_t n,
                           const RunOptions& opt = {});

}  // namespace aykit
