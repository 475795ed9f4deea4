#include "aykit/path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aykit/error.hpp"

namespace aykit {

Path::Path(std::vector<double> times, std::vector<double> values, std::optional<std::size_t> stop_index)
    : times_(std::move(times)), values_(std::move(values)), stop_(stop_index) {
  if (times_.empty()) throw ValidationError("path is empty");
  if (times_.size() != values_.size()) throw ValidationError("path times and values differ in length");
  if (times_.front() != 0.0) throw ValidationError("path must start at t = 0");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || !std::isfinite(times_[i])) {
      throw ValidationError("path entry " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw ValidationError("path times must increase strictly (index " + std::to_string(i) + ")");
    }
  }
  if (stop_) {
    if (*stop_ >= values_.size()) throw ValidationError("stop index outside path");
    for (std::size_t i = *stop_ + 1; i < values_.size(); ++i) {
      if (values_[i] != values_[*stop_]) throw ValidationError("path moves after its stop index");
    }
  }
}

Path Path::uniform(std::vector<double> values, double dt, std::optional<std::size_t> stop_index) {
  if (!(dt > 0.0)) throw ValidationError("grid step must be positive");
  std::vector<double> t(values.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i) * dt;
  return Path(std::move(t), std::move(values), stop_index);
}

const char* to_string(StopKind kind) {
  switch (kind) {
    case StopKind::hit_barrier:
      return "hit_barrier";
    case StopKind::hit_zero:
      return "hit_zero";
    case StopKind::breach:
      return "breach";
    case StopKind::horizon_censored:
      return "horizon_censored";
  }
  return "unknown";
}

Path running_sup(const Path& p) {
  std::vector<double> out(p.values());
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::max(out[i], out[i - 1]);
  return Path(p.times(), std::move(out), p.stop_index());
}

namespace {

void check_start(const Path& p, const Profile& prof) {
  const double a = prof.a();
  if (std::abs(p[0] - a) > 1e-12 * (1.0 + std::abs(a))) {
    throw DomainError("path starts at " + std::to_string(p[0]) + ", profile at " + std::to_string(a), 0);
  }
}

}  // namespace

Path ay_closed_form(const Path& p, const Profile& prof) {
  check_start(p, prof);
  const auto b = prof.barrier();
  std::vector<double> m(p.size());
  std::optional<std::size_t> stop = p.stop_index();
  double xbar = p[0];
  double U = prof.U(xbar), u = prof.u(xbar);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > xbar) {
      xbar = p[i];
      if (!(b && xbar >= *b)) {
        U = prof.U(xbar);
        u = prof.u(xbar);
      }
    }
    if (b && xbar >= *b) {
      const double top = prof.value_at_barrier();
      if (!std::isfinite(top)) throw DomainError("path reaches an explosion level", i);
      std::fill(m.begin() + static_cast<std::ptrdiff_t>(i), m.end(), top);
      if (!stop || *stop > i) stop = i;
      break;
    }
    m[i] = U - u * (xbar - p[i]);
    if (!std::isfinite(m[i])) throw DomainError("transform is not finite", i);
  }
  if (stop) std::fill(m.begin() + static_cast<std::ptrdiff_t>(*stop) + 1, m.end(), m[*stop]);
  return Path(p.times(), std::move(m), stop);
}

Path ay_integral_form(const Path& p, const Profile& prof) {
  check_start(p, prof);
  const auto b = prof.barrier();
  std::vector<double> m(p.size());
  std::optional<std::size_t> stop = p.stop_index();
  double xbar = p[0], u = prof.u(xbar);
  m[0] = prof.a_star();
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (b && xbar >= *b) {
      if (!stop || *stop > i) stop = i;
      break;
    }
    m[i + 1] = m[i] + u * (p[i + 1] - p[i]);
    if (p[i + 1] > xbar) {
      xbar = p[i + 1];
      u = (b && xbar >= *b) ? 0.0 : prof.u(xbar);
    }
  }
  if (!stop && b && xbar >= *b) stop = p.size() - 1;
  if (stop) std::fill(m.begin() + static_cast<std::ptrdiff_t>(*stop) + 1, m.end(), m[*stop]);
  return Path(p.times(), std::move(m), stop);
}

Path ay_inverse(const Path& m, const ProfilePtr& prof) {
  const double top = prof->value_at_barrier();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] > top * (1.0 + 1e-12) + 1e-12) throw DomainError("value above U(b)", i);
  }
  auto inv = inverse(prof);
  auto x = ay_closed_form(m, *inv);
  return x;
}

StopEvent detect_barrier(const Path& p, double level) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= level) return {StopKind::hit_barrier, i, p[i]};
  }
  return {StopKind::horizon_censored, p.size() - 1, p[p.size() - 1]};
}

StopEvent detect_zero(const Path& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) return {StopKind::hit_zero, i, p[i]};
  }
  return {StopKind::horizon_censored, p.size() - 1, p[p.size() - 1]};
}

StopEvent detect_breach(const Path& p, const std::function<double(double)>& w) {
  double xbar = p[0];
  for (std::size_t i = 0; i < p.size(); ++i) {
    xbar = std::max(xbar, p[i]);
    if (p[i] <= w(xbar)) return {StopKind::breach, i, p[i]};
  }
  return {StopKind::horizon_censored, p.size() - 1, p[p.size() - 1]};
}

StopEvent detect_stop(const Path& p, const StopRule& rule) {
  switch (rule.kind) {
    case StopKind::hit_barrier:
      return detect_barrier(p, rule.level);
    case StopKind::hit_zero:
      return detect_zero(p);
    case StopKind::breach:
      if (!rule.drawdown) throw ValidationError("breach rule needs a drawdown function");
      return detect_breach(p, rule.drawdown);
    case StopKind::horizon_censored:
      break;
  }
  return {StopKind::horizon_censored, p.size() - 1, p[p.size() - 1]};
}

}  // namespace aykit
