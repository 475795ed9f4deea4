#include "aykit/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aykit/error.hpp"

namespace aykit {

namespace {

// Levels within this distance above a partial tail sum are treated as the
// breakpoint itself, so rounding in the suffix sums cannot shift a quantile.
constexpr double kSnap = 1e-14;

void check_level(double lambda, bool allow_one) {
  if (!(lambda > 0.0) || lambda > 1.0 || (!allow_one && lambda == 1.0)) {
    throw DomainError("level " + std::to_string(lambda) + " outside " +
                      (allow_one ? "(0,1]" : "(0,1)"));
  }
}

}  // namespace

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ValidationError("measure needs at least one atom");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& a = atoms[i];
    if (!std::isfinite(a.x) || !std::isfinite(a.p)) {
      throw ValidationError("atom " + std::to_string(i) + " is not finite");
    }
    if (a.p < min_weight) {
      throw ValidationError("atom " + std::to_string(i) + " has weight below 1e-12");
    }
    total += a.p;
  }
  if (std::abs(total - 1.0) > sum_tolerance) {
    throw ValidationError("weights sum to " + std::to_string(total) + ", expected 1");
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });
  for (const auto& a : atoms) {
    if (!atoms_.empty() && atoms_.back().x == a.x) {
      atoms_.back().p += a.p;
    } else {
      atoms_.push_back(a);
    }
  }
  for (auto& a : atoms_) a.p /= total;

  const std::size_t n = atoms_.size();
  mass_.assign(n + 1, 0.0);
  moment_.assign(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    mass_[i] = mass_[i + 1] + atoms_[i].p;
    moment_[i] = moment_[i + 1] + atoms_[i].p * atoms_[i].x;
  }
  mass_[0] = 1.0;
}

AtomicMeasure AtomicMeasure::dirac(double c) { return AtomicMeasure({{c, 1.0}}); }

double AtomicMeasure::tail(double x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom& a, double v) { return a.x < v; });
  return mass_[static_cast<std::size_t>(it - atoms_.begin())];
}

double AtomicMeasure::tail_open(double x) const {
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                             [](double v, const Atom& a) { return v < a.x; });
  return mass_[static_cast<std::size_t>(it - atoms_.begin())];
}

std::size_t AtomicMeasure::quantile_index(double lambda) const {
  check_level(lambda, true);
  // mass_ is decreasing; find the first index whose mass falls below lambda.
  auto first = mass_.begin();
  auto last = mass_.begin() + static_cast<std::ptrdiff_t>(atoms_.size());
  auto it = std::partition_point(first, last, [&](double m) { return m >= lambda - kSnap; });
  return static_cast<std::size_t>(it - first) - 1;
}

double AtomicMeasure::tail_quantile(double lambda) const { return atoms_[quantile_index(lambda)].x; }

double AtomicMeasure::integrated_quantile(double lambda) const {
  const std::size_t i = quantile_index(lambda);
  return moment_[i + 1] + (lambda - mass_[i + 1]) * atoms_[i].x;
}

double AtomicMeasure::avar(double lambda) const {
  check_level(lambda, true);
  if (lambda <= top_mass()) return upper();
  return integrated_quantile(lambda) / lambda;
}

double AtomicMeasure::avar_via_calls(double lambda) const {
  check_level(lambda, false);
  double best = call(atoms_.front().x) + lambda * atoms_.front().x;
  for (const auto& a : atoms_) best = std::min(best, call(a.x) + lambda * a.x);
  return best / lambda;
}

double AtomicMeasure::call(double strike) const {
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), strike,
                             [](double v, const Atom& a) { return v < a.x; });
  const auto i = static_cast<std::size_t>(it - atoms_.begin());
  return std::max(0.0, moment_[i] - strike * mass_[i]);
}

double AtomicMeasure::barycentre(double x) const {
  if (x >= upper()) return x;
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom& a, double v) { return a.x < v; });
  const auto i = static_cast<std::size_t>(it - atoms_.begin());
  return moment_[i] / mass_[i];
}

AtomicMeasure shifted(const AtomicMeasure& mu, double c) {
  std::vector<Atom> atoms = mu.atoms();
  for (auto& a : atoms) a.x += c;
  return AtomicMeasure(std::move(atoms));
}

namespace {

template <class Q>
AtomicMeasure from_integrated_quantile(Q q, std::size_t n) {
  if (n == 0) throw ValidationError("discretization needs at least one cell");
  std::vector<Atom> atoms;
  atoms.reserve(n);
  double prev = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double next = q(static_cast<double>(k) / static_cast<double>(n));
    atoms.push_back({(next - prev) * static_cast<double>(n), 1.0 / static_cast<double>(n)});
    prev = next;
  }
  return AtomicMeasure(std::move(atoms));
}

}  // namespace

AtomicMeasure discretize_pareto(double shape, double location, std::size_t n) {
  if (!(shape > 1.0)) throw ValidationError("pareto shape must exceed 1 for a finite mean");
  if (!(location > 0.0)) throw ValidationError("pareto location must be positive");
  const double e = 1.0 - 1.0 / shape;
  return from_integrated_quantile([&](double l) { return location * std::pow(l, e) / e; }, n);
}

AtomicMeasure discretize_uniform(double a, double b, std::size_t n) {
  if (!(b > a)) throw ValidationError("uniform needs a < b");
  return from_integrated_quantile([&](double l) { return b * l - (b - a) * l * l / 2.0; }, n);
}

}  // namespace aykit

namespace aykit {

double QuantileSegment::Q(double lambda) const {
  if (c == 0.0) return a + b * lambda;
  return a + b * lambda + c * std::log(lambda);
}

QuantileProfile::QuantileProfile(std::vector<QuantileSegment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw ValidationError("quantile profile needs a segment");
  if (segments_.front().lo != 0.0 || segments_.back().hi != 1.0) {
    throw ValidationError("quantile profile must cover (0,1]");
  }
  if (segments_.front().c != 0.0 || std::abs(segments_.front().a) > 1e-12) {
    throw ValidationError("first segment must be linear through the origin");
  }
  for (std::size_t j = 0; j < segments_.size(); ++j) {
    const auto& s = segments_[j];
    if (!(s.hi > s.lo) || s.c < 0.0 || !std::isfinite(s.a) || !std::isfinite(s.b) ||
        !std::isfinite(s.c)) {
      throw ValidationError("segment " + std::to_string(j) + " is malformed");
    }
    if (j == 0) continue;
    const auto& p = segments_[j - 1];
    if (p.hi != s.lo) throw ValidationError("segments " + std::to_string(j) + " not contiguous");
    const double scale = 1.0 + std::abs(p.Q(p.hi));
    if (std::abs(p.Q(p.hi) - s.Q(s.lo)) > 1e-9 * scale) {
      throw ValidationError("Q is discontinuous at segment " + std::to_string(j));
    }
    if (s.q(s.lo) > p.q(p.hi) + 1e-9 * (1.0 + std::abs(p.q(p.hi)))) {
      throw ValidationError("tail quantile increases at segment " + std::to_string(j));
    }
  }
}

QuantileProfile QuantileProfile::from_measure(const AtomicMeasure& mu) {
  std::vector<QuantileSegment> segs;
  const std::size_t n = mu.size();
  for (std::size_t i = n; i-- > 0;) {
    const double lo = mu.suffix_mass(i + 1);
    const double hi = mu.suffix_mass(i);
    const double x = mu.atoms()[i].x;
    segs.push_back({lo, hi, mu.suffix_moment(i + 1) - lo * x, x, 0.0});
  }
  segs.front().a = 0.0;
  return QuantileProfile(std::move(segs));
}

std::size_t QuantileProfile::segment_index(double lambda) const {
  auto it = std::partition_point(segments_.begin(), segments_.end(),
                                 [&](const QuantileSegment& s) { return s.hi < lambda - kSnap; });
  if (it == segments_.end()) --it;
  return static_cast<std::size_t>(it - segments_.begin());
}

double QuantileProfile::integrated_quantile(double lambda) const {
  check_level(lambda, true);
  return segments_[segment_index(lambda)].Q(lambda);
}

double QuantileProfile::tail_quantile(double lambda) const {
  check_level(lambda, true);
  return segments_[segment_index(lambda)].q(lambda);
}

double QuantileProfile::tail_quantile_right(double lambda) const {
  if (!(lambda >= 0.0) || lambda >= 1.0) throw DomainError("right limit needs lambda in [0,1)");
  auto it = std::partition_point(segments_.begin(), segments_.end(),
                                 [&](const QuantileSegment& s) { return s.hi <= lambda; });
  return it->c == 0.0 ? it->b : it->b + it->c / lambda;
}

double QuantileProfile::avar(double lambda) const {
  check_level(lambda, true);
  const auto& s = segments_[segment_index(lambda)];
  if (&s == &segments_.front()) return s.b;
  return s.Q(lambda) / lambda;
}

// Lebesgue measure of {l : q(l) >= y} (or > y). The set is an initial interval
// (0, l*]; segments are ordered by decreasing q.
template <class Cmp>
double QuantileProfile::tail_impl(double y, Cmp ge) const {
  auto right_limit = [](const QuantileSegment& s) { return s.lo == 0.0 ? s.b : s.q(s.lo); };
  auto it = std::partition_point(segments_.begin(), segments_.end(),
                                 [&](const QuantileSegment& s) { return ge(right_limit(s), y); });
  if (it == segments_.begin()) return 0.0;
  const auto& s = *std::prev(it);
  if (s.c == 0.0 || y <= s.b) return s.hi;
  return std::min(s.hi, std::max(s.lo, s.c / (y - s.b)));
}

double QuantileProfile::tail(double y) const {
  return tail_impl(y, [](double q, double v) { return q >= v; });
}

double QuantileProfile::tail_open(double y) const {
  return tail_impl(y, [](double q, double v) { return q > v; });
}

double QuantileProfile::call(double strike) const {
  const double l = tail_open(strike);
  if (l == 0.0) return 0.0;
  return std::max(0.0, integrated_quantile(l) - strike * l);
}

std::vector<double> QuantileProfile::tail_breakpoints() const {
  std::vector<double> ys;
  for (const auto& s : segments_) {
    ys.push_back(s.q(s.hi));
    if (s.lo > 0.0) ys.push_back(s.q(s.lo));
  }
  ys.push_back(upper());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  return ys;
}

bool QuantileProfile::is_atomic() const {
  return std::all_of(segments_.begin(), segments_.end(),
                     [](const QuantileSegment& s) { return s.c == 0.0; });
}

AtomicMeasure QuantileProfile::to_atomic() const {
  if (!is_atomic()) throw DomainError("profile has curved segments");
  std::vector<Atom> atoms;
  for (const auto& s : segments_) atoms.push_back({s.b, s.hi - s.lo});
  return AtomicMeasure(std::move(atoms));
}

}  // namespace aykit
