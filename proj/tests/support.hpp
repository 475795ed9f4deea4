#pragma once

// Brute-force oracles and random instances shared by the tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "aykit/measure.hpp"
#include "aykit/path.hpp"

namespace testing_support {

using aykit::Atom;
using aykit::AtomicMeasure;

inline AtomicMeasure random_measure(std::mt19937_64& rng, std::size_t n, bool centered = false) {
  std::uniform_real_distribution<double> loc(-3.0, 3.0), w(0.05, 1.0);
  std::vector<Atom> atoms(n);
  double total = 0.0;
  for (auto& a : atoms) {
    a.x = loc(rng);
    a.p = w(rng);
    total += a.p;
  }
  double mean = 0.0;
  for (auto& a : atoms) {
    a.p /= total;
    mean += a.p * a.x;
  }
  if (centered)
    for (auto& a : atoms) a.x -= mean;
  return AtomicMeasure(atoms);
}

inline double tail(const AtomicMeasure& mu, double x) {
  double s = 0.0;
  for (const auto& a : mu.atoms())
    if (a.x >= x) s += a.p;
  return s;
}

inline double call(const AtomicMeasure& mu, double k) {
  double s = 0.0;
  for (const auto& a : mu.atoms()) s += a.p * std::max(a.x - k, 0.0);
  return s;
}

// inf{x : tail(x) < lambda}, scanning atoms from the top.
inline double tail_quantile(const AtomicMeasure& mu, double lambda) {
  const auto& at = mu.atoms();
  double mass = 0.0;
  for (std::size_t i = at.size(); i-- > 0;) {
    mass += at[i].p;
    if (mass >= lambda - 1e-14) return at[i].x;
  }
  return at.front().x;
}

// (1/lambda) times the top-lambda share of the mean, filling from the largest atom.
inline double avar(const AtomicMeasure& mu, double lambda) {
  const auto& at = mu.atoms();
  double left = lambda, acc = 0.0;
  for (std::size_t i = at.size(); i-- > 0 && left > 0.0;) {
    const double take = std::min(left, at[i].p);
    acc += take * at[i].x;
    left -= take;
  }
  return acc / lambda;
}

inline double barycentre(const AtomicMeasure& mu, double x) {
  double m = 0.0, s = 0.0;
  for (const auto& a : mu.atoms())
    if (a.x >= x) {
      m += a.p;
      s += a.p * a.x;
    }
  return m > 0.0 ? s / m : x;
}

inline aykit::Path random_walk(std::mt19937_64& rng, std::size_t n, double dt, double start = 0.0,
                               double sigma = 1.0) {
  std::normal_distribution<double> z;
  std::vector<double> v{start};
  for (std::size_t i = 1; i <= n; ++i) v.push_back(v.back() + sigma * std::sqrt(dt) * z(rng));
  return aykit::Path::uniform(std::move(v), dt);
}

inline aykit::Path random_positive_walk(std::mt19937_64& rng, std::size_t n, double dt, double start = 1.0,
                                        double sigma = 1.0) {
  std::normal_distribution<double> z;
  std::vector<double> v{start};
  for (std::size_t i = 1; i <= n; ++i) v.push_back(v.back() * std::exp(sigma * std::sqrt(dt) * z(rng) - 0.5 * sigma * sigma * dt));
  return aykit::Path::uniform(std::move(v), dt);
}

}  // namespace testing_support
