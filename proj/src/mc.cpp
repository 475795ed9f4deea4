#include "aykit/mc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "aykit/error.hpp"

namespace aykit {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t step_cap(const GenSpec& spec, const RunOptions& opt) {
  const double h = spec.horizon * std::max(1.0, opt.auto_extend ? opt.max_extension : 1.0);
  return static_cast<std::size_t>(std::llround(h / spec.dt));
}

struct MaxRun {
  double max = 0.0;       // running max of N (log of N/N0 for exp_martingale)
  double residual = 0.0;  // N_T / Nbar_T, 0 when absorbed
  std::size_t steps = 0;
  bool capped = false;
  std::optional<StopKind> stop;
};

// Runs one path to the horizon, then on until the censoring residual
// N/Nbar drops below the budget or the cap is reached.
MaxRun run_maximum(const GenSpec& spec, std::size_t i, const RunOptions& opt) {
  PathStepper st(spec, i);
  const bool log_space = spec.kind == GenKind::exp_martingale;
  const bool bridge = log_space && opt.bridge_max;
  const std::size_t horizon = spec.steps();
  const std::size_t cap = step_cap(spec, opt);
  const double log_budget = std::log(opt.censor_budget);
  BridgeSampler bridge_max(spec, i);
  MaxRun r;
  r.max = log_space ? 0.0 : spec.start;
  auto small = [&] {
    if (log_space) return st.log_value() - r.max < log_budget;
    return st.value() <= opt.censor_budget * r.max;
  };
  auto advance = [&] {
    const double a = st.log_value();
    st.step();
    const double v = log_space ? st.log_value() : st.value();
    if (bridge) r.max = bridge_max.update_max(a, v, r.max);
    else if (v > r.max) r.max = v;
  };
  while (!st.stopped() && st.index() < horizon) advance();
  if (opt.auto_extend) {
    while (!st.stopped() && !small() && st.index() < cap) advance();
  }
  r.steps = st.index();
  r.stop = st.stop_kind();
  if (!st.stopped()) {
    r.residual = log_space ? std::exp(st.log_value() - r.max) : st.value() / r.max;
    r.capped = opt.auto_extend && !small();
  }
  return r;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

void require_paths(std::size_t n) {
  if (n == 0) throw ValidationError("number of paths must be positive");
}

}  // namespace

const char* to_string(GenKind kind) {
  switch (kind) {
    case GenKind::brownian: return "brownian";
    case GenKind::exp_martingale: return "exp_martingale";
    case GenKind::bm_stopped_at_0: return "bm_stopped_at_0";
    case GenKind::exit_interval: return "exit_interval";
    case GenKind::floored_gbm_stopped_at_0: return "floored_gbm_stopped_at_0";
  }
  return "?";
}

GenKind gen_kind_from_string(const std::string& name) {
  if (name == "brownian" || name == "bm") return GenKind::brownian;
  if (name == "exp_martingale" || name == "exp" || name == "gbm") return GenKind::exp_martingale;
  if (name == "bm_stopped_at_0" || name == "bm_from_a_stopped_at_0") return GenKind::bm_stopped_at_0;
  if (name == "exit_interval") return GenKind::exit_interval;
  if (name == "floored_gbm_stopped_at_0" || name == "floored_gbm") return GenKind::floored_gbm_stopped_at_0;
  throw ValidationError("unknown generator kind '" + name + "'");
}

void GenSpec::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (!(horizon >= dt * (1.0 - 1e-12)) || !std::isfinite(horizon)) throw ValidationError("horizon must be at least dt");
  if (!(volatility > 0.0) || !std::isfinite(volatility)) throw ValidationError("volatility must be positive");
  if (!std::isfinite(start)) throw ValidationError("start must be finite");
  if (nonnegative_martingale() && !(start > 0.0))
    throw ValidationError(std::string("start must be positive for ") + to_string(kind));
  if (kind == GenKind::exit_interval && !(upper > start))
    throw ValidationError("exit_interval needs upper > start");
  if (kind == GenKind::floored_gbm_stopped_at_0 && !(floor > 0.0))
    throw ValidationError("floored_gbm_stopped_at_0 needs floor > 0");
}

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index, std::uint64_t stream) {
  return splitmix(splitmix(splitmix(base) ^ index) ^ (stream * 0x632be59bd9b4e019ULL));
}

GeneratedPath generate(const GenSpec& spec, std::uint64_t index) {
  spec.validate();
  const std::size_t n = spec.steps();
  PathStepper st(spec, index);
  std::vector<double> values;
  values.reserve(n + 1);
  values.push_back(st.value());
  std::optional<StopEvent> event;
  while (st.index() < n && !st.stopped()) {
    st.step();
    values.push_back(st.value());
  }
  if (st.stopped()) {
    event = StopEvent{*st.stop_kind(), st.index(), st.value()};
    values.resize(n + 1, st.value());
  }
  auto path = Path::uniform(std::move(values), spec.dt, event ? std::optional<std::size_t>(event->index) : std::nullopt);
  if (!event && spec.nonnegative_martingale() && spec.kind != GenKind::exp_martingale)
    event = StopEvent{StopKind::horizon_censored, n, path.values().back()};
  return {std::move(path), event};
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  const unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (t == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex mu;
  for (unsigned w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += t) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

McReport uniform_law_report(const GenSpec& spec, std::size_t n, const RunOptions& opt) {
  spec.validate();
  require_paths(n);
  if (!spec.nonnegative_martingale()) throw DomainError("uniform law needs a nonnegative martingale generator");
  std::vector<MaxRun> runs(n);
  parallel_for(n, opt.threads, [&](std::size_t i) { runs[i] = run_maximum(spec, i, opt); });

  McReport rep;
  rep.name = "uniform-law";
  rep.spec = spec;
  rep.n_paths = n;
  std::vector<double> residuals(n);
  double steps = 0.0, capped = 0.0, at_barrier = 0.0;
  rep.samples.resize(n);
  const bool exit = spec.kind == GenKind::exit_interval;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = runs[i];
    residuals[i] = r.residual;
    steps += static_cast<double>(r.steps);
    capped += r.capped ? 1.0 : 0.0;
    const double nbar = spec.kind == GenKind::exp_martingale ? spec.start * std::exp(r.max) : r.max;
    if (exit) {
      rep.samples[i] = std::min(nbar, spec.upper);
      at_barrier += nbar >= spec.upper ? 1.0 : 0.0;
    } else {
      rep.samples[i] = spec.start / nbar;
    }
  }
  rep.censored_fraction = std::clamp(mean_of(residuals), 0.0, 1.0);
  rep.inconclusive = rep.censored_fraction > opt.censor_budget;

  const double n0 = spec.start;
  if (exit) {
    const double b = spec.upper;
    rep.target = Cdf{
        [n0, b](double y) { return y < n0 ? 0.0 : (y >= b ? 1.0 : 1.0 - n0 / y); },
        [n0, b](double y) { return y <= n0 ? 0.0 : (y > b ? 1.0 : 1.0 - n0 / y); },
        {b}};
    rep.stats["barrier_probability"] = at_barrier / static_cast<double>(n);
    rep.stats["barrier_probability_target"] = n0 / b;
    rep.notes["statistic"] = "KS of Nbar at exit against (N0/xi) ^ b";
  } else {
    rep.target = uniform_cdf(0.0, 1.0);
    rep.notes["statistic"] = "KS of N0/Nbar against Uniform[0,1]";
  }
  rep.notes["maximum"] = spec.kind == GenKind::exp_martingale && opt.bridge_max
                             ? "grid maximum refined by the exact Brownian-bridge maximum within steps"
                             : "grid maximum";
  const Ecdf e(rep.samples);
  rep.ks_stat = ks_distance(e, *rep.target);
  for (double q : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95}) {
    const double level = exit ? n0 / (1.0 - q) : q;
    const double lv = exit ? std::min(level, spec.upper) : level;
    rep.table.push_back({lv, e(lv), rep.target->at(lv), std::nullopt, std::nullopt});
  }
  rep.stats["mean_steps"] = steps / static_cast<double>(n);
  rep.stats["capped_paths"] = capped;
  return rep;
}

McReport last_passage_report(const GenSpec& spec, std::size_t n, const std::vector<double>& t_list,
                             const RunOptions& opt) {
  spec.validate();
  require_paths(n);
  if (spec.kind != GenKind::exp_martingale) throw DomainError("last passage needs the exp_martingale generator");
  if (t_list.empty()) throw ValidationError("t_list must not be empty");
  for (double t : t_list)
    if (!(t > 0.0) || t > spec.horizon * (1.0 + 1e-12))
      throw DomainError("last-passage times must lie in (0, horizon]");
  const std::size_t horizon = spec.steps();
  const double log_level = -std::log(spec.start);  // N >= 1 iff log(N/N0) >= -log N0

  struct Run {
    std::size_t last;      // last grid index with N >= 1
    bool ever;             // some grid point with N >= 1
    double terminal;       // N_H
  };
  std::vector<Run> runs(n);
  parallel_for(n, opt.threads, [&](std::size_t i) {
    PathStepper st(spec, i);
    Run r{0, st.log_value() >= log_level, st.value()};
    while (st.index() < horizon) {
      st.step();
      if (st.log_value() >= log_level) {
        r.last = st.index();
        r.ever = true;
      }
    }
    r.terminal = st.value();
    runs[i] = r;
  });

  McReport rep;
  rep.name = "last-passage";
  rep.spec = spec;
  rep.n_paths = n;
  double worst = 0.0, worst_raw = 0.0, censored = 0.0;
  for (const auto& r : runs) censored += std::min(1.0, r.terminal);
  rep.censored_fraction = std::clamp(censored / static_cast<double>(n), 0.0, 1.0);
  for (double t : t_list) {
    const double target = normal_cdf(std::sqrt(t) / 2.0) - normal_cdf(-std::sqrt(t) / 2.0);
    double raw = 0.0, completed = 0.0;
    for (const auto& r : runs) {
      const bool before = !r.ever || static_cast<double>(r.last) * spec.dt < t;
      if (before) {
        raw += 1.0;
        completed += std::max(0.0, 1.0 - r.terminal);
      }
    }
    raw /= static_cast<double>(n);
    completed /= static_cast<double>(n);
    const double ci = 1.96 * std::sqrt(std::max(target * (1.0 - target), 0.0) / static_cast<double>(n));
    rep.table.push_back({t, completed, target, raw, ci});
    worst = std::max(worst, std::abs(completed - target));
    worst_raw = std::max(worst_raw, std::abs(raw - target));
  }
  rep.stats["max_abs_error"] = worst;
  rep.stats["max_abs_error_uncompleted"] = worst_raw;
  rep.stats["mesh"] = spec.dt;
  rep.notes["statistic"] = "P(g1 < t), g1 the last grid time with N >= 1, completed beyond the horizon by (1 - N_H)^+";
  rep.notes["reference"] = "raw indicator estimate without completion";
  return rep;
}

McReport breach_law_report(const GenSpec& spec, const DrawdownFunction& w, double a_star, std::size_t n,
                           const RunOptions& opt) {
  spec.validate();
  require_paths(n);
  if (spec.kind != GenKind::bm_stopped_at_0 && spec.kind != GenKind::floored_gbm_stopped_at_0)
    throw DomainError("breach law needs a generator absorbed at 0");
  const ProfilePtr prof = v_from_w(w, spec.start, a_star);
  const double b = prof->barrier().value_or(std::numeric_limits<double>::infinity());
  const double r_w = w.level().value_or(std::numeric_limits<double>::infinity());
  const std::size_t horizon = spec.steps();
  const std::size_t cap = step_cap(spec, opt);

  struct Run {
    double ybar;
    double error;  // |Y_zeta - w(Ybar_zeta)| when breached
    double residual;
    bool breached;
    bool undershoot;
  };
  std::vector<Run> runs(n);
  parallel_for(n, opt.threads, [&](std::size_t i) {
    PathStepper st(spec, i);
    double nbar = spec.start;
    double big_u = prof->U(nbar), small_u = prof->u(nbar);
    Run r{big_u, 0.0, 0.0, false, false};
    auto advance = [&] {
      st.step();
      const double x = st.value();
      if (x > nbar) {
        nbar = std::min(x, b);
        big_u = prof->U(nbar);
        small_u = prof->u(nbar);
      }
      return x;
    };
    bool reached_barrier = false;
    while (!st.stopped() && st.index() < cap) {
      const double x = advance();
      if (x >= b) {
        reached_barrier = true;
        break;
      }
      // Extension runs on to absorption so that every breach can be checked.
      if (st.index() >= horizon && !opt.auto_extend) break;
    }
    r.ybar = reached_barrier ? r_w : big_u;
    if (st.stopped() || reached_barrier) {
      const double y = reached_barrier ? r_w : big_u - small_u * (nbar - st.value());
      r.breached = true;
      r.error = std::abs(y - w(r.ybar));
      r.undershoot = y < w(r.ybar) - 1e-12 * (1.0 + std::abs(y));
    } else {
      r.residual = st.value() / nbar;
    }
    runs[i] = r;
  });

  McReport rep;
  rep.name = "breach-law";
  rep.spec = spec;
  rep.n_paths = n;
  rep.samples.resize(n);
  double residual = 0.0, breached = 0.0, max_error = 0.0, undershoot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rep.samples[i] = runs[i].ybar;
    residual += runs[i].residual;
    if (runs[i].breached) {
      breached += 1.0;
      max_error = std::max(max_error, runs[i].error);
      undershoot += runs[i].undershoot ? 1.0 : 0.0;
    }
  }
  rep.censored_fraction = std::clamp(residual / static_cast<double>(n), 0.0, 1.0);
  rep.inconclusive = rep.censored_fraction > opt.censor_budget;
  const double n0 = spec.start;
  const double lo = prof->U(n0);
  rep.target = Cdf{
      [prof, n0, lo, r_w](double y) { return y < lo ? 0.0 : (y >= r_w ? 1.0 : 1.0 - n0 / prof->V(y)); },
      [prof, n0, lo, r_w, b](double y) {
        if (y <= lo) return 0.0;
        if (y > r_w) return 1.0;
        return y == r_w ? 1.0 - n0 / b : 1.0 - n0 / prof->V(y);
      },
      std::isfinite(r_w) ? std::vector<double>{r_w} : std::vector<double>{}};
  const Ecdf e(rep.samples);
  rep.ks_stat = ks_distance(e, *rep.target);
  for (double q : {0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99}) {
    double level = prof->U(n0 / (1.0 - q));
    if (std::isfinite(r_w)) level = std::min(level, r_w);
    rep.table.push_back({level, e(level), rep.target->at(level), std::nullopt, std::nullopt});
  }
  rep.stats["breached_fraction"] = breached / static_cast<double>(n);
  rep.stats["max_breach_error"] = max_error;
  rep.stats["undershoot_paths"] = undershoot;
  rep.notes["statistic"] = "KS of Ybar at breach against P(Ybar >= y) = N0/V(y)";
  return rep;
}

}  // namespace aykit
