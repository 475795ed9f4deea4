#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aykit/error.hpp"
#include "aykit/transform.hpp"

namespace aykit {

QuantileProfile hl_transform(const AtomicMeasure& mu) {
  std::vector<QuantileSegment> segs;
  const std::size_t n = mu.size();
  double q_lo = 0.0;  // Q_HL at the left end of the current cell
  for (std::size_t i = n; i-- > 0;) {
    const double lo = mu.suffix_mass(i + 1);
    const double hi = mu.suffix_mass(i);
    const double x = mu.atoms()[i].x;
    if (i == n - 1) {
      segs.push_back({0.0, hi, 0.0, x, 0.0});
      q_lo = x * hi;
      continue;
    }
    const double c = std::max(0.0, mu.suffix_moment(i + 1) - lo * x);
    const double a = q_lo - x * lo - c * std::log(lo);
    segs.push_back({lo, hi, a, x, c});
    q_lo = segs.back().Q(hi);
  }
  return QuantileProfile(std::move(segs));
}

double hl_tail_dual(const AtomicMeasure& mu, double y) {
  if (!(y > mu.mean()) || !(y < mu.upper())) {
    throw DomainError("hl_tail_dual needs y inside (mean, upper)");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : mu.atoms()) {
    if (a.x >= y) break;
    best = std::min(best, mu.call(a.x) / (y - a.x));
  }
  return best;
}

PiecewiseLinearConcave::PiecewiseLinearConcave(std::vector<ConcaveVertex> vertices)
    : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2 || vertices_.front().lambda != 0.0 || vertices_.front().g != 0.0) {
    throw ValidationError("concave function needs vertices starting at the origin");
  }
  for (std::size_t j = 1; j < vertices_.size(); ++j) {
    if (!(vertices_[j].lambda > vertices_[j - 1].lambda)) {
      throw ValidationError("vertex abscissae must increase");
    }
  }
  auto s = slopes();
  for (std::size_t j = 1; j < s.size(); ++j) {
    if (!(s[j] < s[j - 1])) throw ValidationError("slopes must strictly decrease");
  }
}

double PiecewiseLinearConcave::operator()(double lambda) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), lambda,
                             [](const ConcaveVertex& v, double l) { return v.lambda < l; });
  if (it == vertices_.end()) return vertices_.back().g;
  if (it == vertices_.begin() || it->lambda == lambda) return it->g;
  const auto& p = *std::prev(it);
  return p.g + (it->g - p.g) * (lambda - p.lambda) / (it->lambda - p.lambda);
}

std::vector<double> PiecewiseLinearConcave::slopes() const {
  std::vector<double> s;
  for (std::size_t j = 1; j < vertices_.size(); ++j) {
    s.push_back((vertices_[j].g - vertices_[j - 1].g) / (vertices_[j].lambda - vertices_[j - 1].lambda));
  }
  return s;
}

namespace {

// Upper hull of points sorted by abscissa (monotone chain), then merge of
// edges whose slopes agree to rounding.
PiecewiseLinearConcave upper_hull(std::vector<ConcaveVertex> pts) {
  std::vector<ConcaveVertex> hull;
  for (const auto& p : pts) {
    if (!hull.empty() && hull.back().lambda == p.lambda) {
      hull.back().g = std::max(hull.back().g, p.g);
      continue;
    }
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& q = hull.back();
      const double cross = (q.lambda - o.lambda) * (p.g - o.g) - (q.g - o.g) * (p.lambda - o.lambda);
      if (cross < 0.0) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }
  std::vector<ConcaveVertex> merged{hull.front()};
  for (std::size_t j = 1; j < hull.size(); ++j) {
    if (merged.size() >= 2) {
      const auto& o = merged[merged.size() - 2];
      const auto& q = merged.back();
      const double s1 = (q.g - o.g) / (q.lambda - o.lambda);
      const double s2 = (hull[j].g - q.g) / (hull[j].lambda - q.lambda);
      if (std::abs(s1 - s2) <= 1e-10 * (1.0 + std::abs(s1))) {
        merged.back() = hull[j];
        continue;
      }
    }
    merged.push_back(hull[j]);
  }
  return PiecewiseLinearConcave(std::move(merged));
}

AtomicMeasure measure_from_envelope(const PiecewiseLinearConcave& g) {
  std::vector<Atom> atoms;
  const auto& v = g.vertices();
  const auto s = g.slopes();
  for (std::size_t j = 0; j < s.size(); ++j) atoms.push_back({s[j], v[j + 1].lambda - v[j].lambda});
  return AtomicMeasure(std::move(atoms));
}

std::vector<ConcaveVertex> graph_points(const QuantileProfile& nu) {
  std::vector<ConcaveVertex> pts{{0.0, 0.0}};
  for (const auto& s : nu.segments()) pts.push_back({s.hi, s.hi * s.q(s.hi)});
  return pts;
}

}  // namespace

PiecewiseLinearConcave concave_envelope(const QuantileProfile& nu) {
  return upper_hull(graph_points(nu));
}

AtomicMeasure delta_operator(const QuantileProfile& nu) {
  return measure_from_envelope(concave_envelope(nu));
}

AtomicMeasure delta_operator(const AtomicMeasure& nu) {
  return delta_operator(QuantileProfile::from_measure(nu));
}

AtomicMeasure delta_operator(const std::function<double(double)>& tail_quantile, std::size_t points,
                             double lambda_min) {
  if (points < 2 || !(lambda_min > 0.0) || !(lambda_min < 1.0)) {
    throw ValidationError("sampling grid needs at least two levels in (0,1)");
  }
  // l*q(l) must vanish at 0; probe three decades below the grid.
  double scale = 0.0;
  std::vector<ConcaveVertex> pts{{0.0, 0.0}};
  const double step = std::log(lambda_min) / static_cast<double>(points - 1);
  for (std::size_t k = points; k-- > 0;) {
    const double l = k == 0 ? 1.0 : std::exp(step * static_cast<double>(k));
    const double g = l * tail_quantile(l);
    if (!std::isfinite(g)) throw NoSolutionError("tail quantile is not finite on the grid");
    scale = std::max(scale, std::abs(g));
    pts.push_back({l, g});
  }
  const double probe[] = {lambda_min * 1e-3, lambda_min * 1e-6, lambda_min * 1e-9};
  double prev = std::abs(lambda_min * tail_quantile(lambda_min));
  for (double l : probe) {
    const double g = std::abs(l * tail_quantile(l));
    if (!std::isfinite(g) || g > prev * (1.0 + 1e-12) + 1e-300) {
      throw NoSolutionError("l*q(l) does not decay to 0 as l -> 0");
    }
    prev = g;
  }
  if (prev > 1e-4 * std::max(scale, 1e-300)) {
    throw NoSolutionError("l*q(l) does not decay to 0 as l -> 0");
  }
  return measure_from_envelope(upper_hull(std::move(pts)));
}

double pseudo_fenchel(const QuantileProfile& nu, double x) {
  double best = 0.0;
  for (const auto& p : graph_points(nu)) best = std::max(best, p.g - p.lambda * x);
  return best;
}

double delta_tail_via_fenchel(const QuantileProfile& nu, double x) {
  const auto pts = graph_points(nu);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) best = std::max(best, p.g - p.lambda * x);
  const double tol = 1e-12 * (1.0 + std::abs(best));
  double lambda = 0.0;
  for (const auto& p : pts) {
    if (p.g - p.lambda * x >= best - tol) lambda = std::max(lambda, p.lambda);
  }
  return lambda;
}

namespace {

// Shape of a tail function on an open interval free of breakpoints: either
// constant, or c/(y - b) from a curved quantile segment.
struct TailPiece {
  bool curved;
  double level;
  double c;
  double b;
};

TailPiece tail_piece(const QuantileProfile& nu, double y) {
  const double l = nu.tail(y);
  for (const auto& s : nu.segments()) {
    if (s.c > 0.0 && l > s.lo && l < s.hi) return {true, l, s.c, s.b};
  }
  return {false, l, 0.0, 0.0};
}

std::vector<double> merged_breakpoints(const QuantileProfile& rho, const QuantileProfile& nu) {
  auto ys = rho.tail_breakpoints();
  auto other = nu.tail_breakpoints();
  ys.insert(ys.end(), other.begin(), other.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  return ys;
}

struct Tracker {
  double worst = std::numeric_limits<double>::infinity();
  double witness = 0.0;
  void offer(double gap, double y) {
    if (gap < worst) {
      worst = gap;
      witness = y;
    }
  }
};

template <class Stationary, class Gap>
OrderVerdict scan(const QuantileProfile& rho, const QuantileProfile& nu, double tolerance,
                  Gap closed_gap, Gap open_gap, Stationary stationary) {
  const auto ys = merged_breakpoints(rho, nu);
  Tracker t;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    t.offer(closed_gap(ys[k]), ys[k]);
    // The open gap is attained just right of ys[k]; report a point there.
    const double right = k + 1 < ys.size() ? 0.5 * (ys[k] + ys[k + 1]) : ys[k] + 1.0;
    t.offer(open_gap(ys[k]), right);
    if (k + 1 == ys.size()) break;
    const double lo = ys[k], hi = ys[k + 1];
    const double mid = 0.5 * (lo + hi);
    for (double y : stationary(tail_piece(rho, mid), tail_piece(nu, mid))) {
      if (y > lo && y < hi) t.offer(closed_gap(y), y);
    }
  }
  return {t.worst >= -tolerance, t.worst, t.witness};
}

}  // namespace

OrderVerdict stochastic_dominates(const QuantileProfile& rho, const QuantileProfile& nu,
                                  double tolerance) {
  auto closed = [&](double y) { return rho.tail(y) - nu.tail(y); };
  auto open = [&](double y) { return rho.tail_open(y) - nu.tail_open(y); };
  // d/dy [c1/(y-b1) - c2/(y-b2)] = 0  <=>  (y-b2)/(y-b1) = sqrt(c2/c1).
  auto stationary = [](const TailPiece& p, const TailPiece& q) {
    std::vector<double> out;
    if (p.curved && q.curved) {
      const double k = std::sqrt(q.c / p.c);
      if (k != 1.0) out.push_back((q.b - k * p.b) / (1.0 - k));
    }
    return out;
  };
  return scan(rho, nu, tolerance, std::function<double(double)>(closed),
              std::function<double(double)>(open), stationary);
}

OrderVerdict icx_dominates(const QuantileProfile& rho, const QuantileProfile& nu, double tolerance) {
  auto gap = [&](double k) { return rho.call(k) - nu.call(k); };
  // The call difference is stationary where the two tails agree.
  auto stationary = [](const TailPiece& p, const TailPiece& q) {
    std::vector<double> out;
    if (p.curved && q.curved && p.c != q.c) {
      out.push_back((p.c * q.b - q.c * p.b) / (p.c - q.c));
    } else if (p.curved && !q.curved && q.level > 0.0) {
      out.push_back(p.b + p.c / q.level);
    } else if (q.curved && !p.curved && p.level > 0.0) {
      out.push_back(q.b + q.c / p.level);
    }
    return out;
  };
  std::function<double(double)> g = gap;
  return scan(rho, nu, tolerance, g, g, stationary);
}

OrderVerdict stochastic_dominates(const AtomicMeasure& rho, const AtomicMeasure& nu,
                                  double tolerance) {
  return stochastic_dominates(QuantileProfile::from_measure(rho), QuantileProfile::from_measure(nu),
                              tolerance);
}

OrderVerdict icx_dominates(const AtomicMeasure& rho, const AtomicMeasure& nu, double tolerance) {
  return icx_dominates(QuantileProfile::from_measure(rho), QuantileProfile::from_measure(nu),
                       tolerance);
}

}  // namespace aykit
