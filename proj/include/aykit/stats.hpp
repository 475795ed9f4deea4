#pragma once

#include <functional>
#include <span>
#include <vector>

#include "aykit/measure.hpp"

namespace aykit {

// Target distribution for KS distances: F(x) = P(X <= x), its left limit
// F(x-) = P(X < x) and the jump locations.
struct Cdf {
  std::function<double(double)> at;
  std::function<double(double)> left;
  std::vector<double> atoms;
};

Cdf continuous_cdf(std::function<double(double)> f);
Cdf uniform_cdf(double lo = 0.0, double hi = 1.0);
Cdf cdf_of(const AtomicMeasure& mu);
Cdf cdf_of(const QuantileProfile& nu);

class Ecdf {
 public:
  explicit Ecdf(std::vector<double> samples);
  double operator()(double x) const;  // fraction <= x
  double left(double x) const;        // fraction < x
  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

Ecdf ecdf(std::vector<double> samples);

// sup |F_n - F| over the union of sample points and target atoms, checking
// both one-sided limits at every such point.
double ks_distance(const Ecdf& empirical, const Cdf& target);

// Total variation against an atomic target after assigning each sample to its
// nearest atom within `window`; unmatched samples count as mass off the support.
double tv_atomic(std::span<const double> samples, const AtomicMeasure& mu, double window = 0.0);

double normal_cdf(double x);

}  // namespace aykit
