#include "aykit/stats.hpp"

#include <algorithm>
#include <cmath>

#include "aykit/error.hpp"

namespace aykit {

Cdf continuous_cdf(std::function<double(double)> f) { return {f, f, {}}; }

Cdf uniform_cdf(double lo, double hi) {
  if (!(hi > lo)) throw ValidationError("uniform cdf needs lo < hi");
  return continuous_cdf([lo, hi](double x) { return std::clamp((x - lo) / (hi - lo), 0.0, 1.0); });
}

Cdf cdf_of(const AtomicMeasure& mu) {
  std::vector<double> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back(a.x);
  return {[mu](double x) { return 1.0 - mu.tail_open(x); }, [mu](double x) { return 1.0 - mu.tail(x); },
          std::move(atoms)};
}

Cdf cdf_of(const QuantileProfile& nu) {
  std::vector<double> atoms;
  for (const auto& s : nu.segments()) {
    if (s.c == 0.0) atoms.push_back(s.b);
  }
  return {[nu](double x) { return 1.0 - nu.tail_open(x); }, [nu](double x) { return 1.0 - nu.tail(x); },
          std::move(atoms)};
}

Ecdf::Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw ValidationError("empirical cdf needs at least one sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double Ecdf::left(double x) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

Ecdf ecdf(std::vector<double> samples) { return Ecdf(std::move(samples)); }

double ks_distance(const Ecdf& empirical, const Cdf& target) {
  const auto& s = empirical.sorted();
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    const double below = static_cast<double>(i) / n, upto = static_cast<double>(j) / n;
    d = std::max({d, std::abs(upto - target.at(s[i])), std::abs(below - target.left(s[i]))});
    i = j;
  }
  for (double a : target.atoms) {
    d = std::max({d, std::abs(empirical(a) - target.at(a)), std::abs(empirical.left(a) - target.left(a))});
  }
  return std::min(d, 1.0);
}

double tv_atomic(std::span<const double> samples, const AtomicMeasure& mu, double window) {
  if (samples.empty()) throw ValidationError("total variation needs at least one sample");
  const auto& atoms = mu.atoms();
  std::vector<double> counts(atoms.size(), 0.0);
  double unmatched = 0.0;
  for (double x : samples) {
    auto it = std::lower_bound(atoms.begin(), atoms.end(), x, [](const Atom& a, double v) { return a.x < v; });
    std::size_t best = atoms.size();
    double dist = window;
    if (it != atoms.end() && std::abs(it->x - x) <= dist) {
      best = static_cast<std::size_t>(it - atoms.begin());
      dist = std::abs(it->x - x);
    }
    if (it != atoms.begin() && std::abs(std::prev(it)->x - x) <= dist) {
      best = static_cast<std::size_t>(std::prev(it) - atoms.begin());
    }
    if (best == atoms.size()) {
      unmatched += 1.0;
    } else {
      counts[best] += 1.0;
    }
  }
  const double n = static_cast<double>(samples.size());
  double tv = unmatched / n;
  for (std::size_t i = 0; i < atoms.size(); ++i) tv += std::abs(counts[i] / n - atoms[i].p);
  return std::min(1.0, 0.5 * tv);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace aykit
