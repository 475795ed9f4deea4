#include "aykit/sde.hpp"

#include <algorithm>
#include <cmath>

#include "aykit/error.hpp"

namespace aykit {

namespace {

Path truncate(const Path& p, std::size_t n) {
  std::vector<double> t(p.times().begin(), p.times().begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<double> v(p.values().begin(), p.values().begin() + static_cast<std::ptrdiff_t>(n));
  std::optional<std::size_t> s;
  if (p.stop_index() && *p.stop_index() < n) s = p.stop_index();
  return Path(std::move(t), std::move(v), s);
}

// Index of the first grid point at or above the explosion level, if any.
std::optional<std::size_t> explosion_index(const Path& x, const Profile& prof) {
  auto b = prof.barrier();
  if (!b) return std::nullopt;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= *b) return i;
  }
  return std::nullopt;
}

StopEvent censored(const Path& p) {
  return {StopKind::horizon_censored, p.size() - 1, p[p.size() - 1]};
}

}  // namespace

SdeSolution solve_bachelier_closed(const Path& x, const Coefficient& phi, double a_star) {
  auto prof = bachelier_profile(phi, x[0], a_star);
  if (auto k = explosion_index(x, *prof)) {
    if (*k == 0) throw DomainError("driver starts at the explosion level", 0);
    auto y = ay_closed_form(truncate(x, *k), *prof);
    return {std::move(y), {StopKind::hit_barrier, *k, *prof->barrier()}};
  }
  auto y = ay_closed_form(x, *prof);
  return {y, censored(y)};
}

Path solve_bachelier_euler(const Path& x, const Coefficient& phi, double a_star) {
  auto prof = bachelier_profile(phi, x[0], a_star);
  std::size_t n = x.size();
  if (auto k = explosion_index(x, *prof)) {
    if (*k == 0) throw DomainError("driver starts at the explosion level", 0);
    n = *k;
  }
  std::vector<double> y(n);
  y[0] = a_star;
  double ybar = a_star;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double p = phi(ybar);
    if (!(p > 0.0)) throw ValidationError("invalid coefficient: phi is not positive");
    y[i + 1] = y[i] + p * (x[i + 1] - x[i]);
    ybar = std::max(ybar, y[i + 1]);
  }
  return Path(std::vector<double>(x.times().begin(), x.times().begin() + static_cast<std::ptrdiff_t>(n)),
              std::move(y));
}

SdeSolution solve_drawdown_closed(const Path& x, const DrawdownFunction& w, double a_star) {
  if (!(x[0] > 0.0)) throw DomainError("drawdown driver must start positive", 0);
  auto prof = v_from_w(w, x[0], a_star);
  const auto top = prof->barrier();
  // zeta: first hit of 0 or of V(r_w-).
  std::size_t zeta = x.size() - 1;
  StopKind kind = StopKind::horizon_censored;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0) {
      zeta = i;
      kind = StopKind::hit_zero;
      break;
    }
    if (top && x[i] >= *top) {
      zeta = i;
      kind = StopKind::hit_barrier;
      break;
    }
  }
  std::vector<double> xs(x.values());
  std::fill(xs.begin() + static_cast<std::ptrdiff_t>(zeta) + 1, xs.end(), xs[zeta]);
  std::optional<std::size_t> stop;
  if (kind != StopKind::horizon_censored) stop = zeta;
  auto y = ay_closed_form(Path(x.times(), std::move(xs), stop), *prof);
  SdeSolution out{y, {kind, zeta, x[zeta]}};
  if (kind == StopKind::hit_zero && x[zeta] < 0.0) {
    double ybar = y[0];
    for (std::size_t i = 0; i <= zeta; ++i) ybar = std::max(ybar, y[i]);
    out.undershoot = y[zeta] < w(ybar);
  }
  return out;
}

Path solve_drawdown_euler(const Path& x, const DrawdownFunction& w, double a_star) {
  if (!(x[0] > 0.0)) throw DomainError("drawdown driver must start positive", 0);
  std::vector<double> y(x.size());
  y[0] = a_star;
  double ybar = a_star;
  std::optional<std::size_t> stop;
  const auto r = w.level();
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (x[i] <= 0.0 || (r && ybar >= *r)) {
      stop = i;
      std::fill(y.begin() + static_cast<std::ptrdiff_t>(i) + 1, y.end(), y[i]);
      break;
    }
    y[i + 1] = y[i] + (y[i] - w(ybar)) * (x[i + 1] - x[i]) / x[i];
    if (r) y[i + 1] = std::min(y[i + 1], *r);
    ybar = std::max(ybar, y[i + 1]);
  }
  return Path(x.times(), std::move(y), stop);
}

Path recover_driver(const Path& y, const DrawdownFunction& w, double a) {
  const std::size_t end = y.stop_index() ? *y.stop_index() : y.size() - 1;
  double ybar = y[0];
  for (std::size_t i = 0; i < end; ++i) {
    ybar = std::max(ybar, y[i]);
    if (!(y[i] > w(ybar))) throw ConstraintError("drawdown constraint violated before the breach", i);
  }
  auto prof = v_from_w(w, a, y[0]);
  return ay_inverse(y, prof);
}

}  // namespace aykit
