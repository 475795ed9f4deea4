#pragma once

#include <cstddef>
#include <vector>

namespace aykit {

struct Atom {
  double x;
  double p;
};

// Finite probability measure on the real line. Atoms are sorted by location,
// duplicates merged. Tails use the closed interval: tail(x) = mu([x, inf)).
// Tail quantiles are left-continuous: q(l) = inf{x : tail(x) < l}.
class AtomicMeasure {
 public:
  static constexpr double min_weight = 1e-12;
  static constexpr double sum_tolerance = 1e-12;

  explicit AtomicMeasure(std::vector<Atom> atoms);
  static AtomicMeasure dirac(double c);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  double lower() const { return atoms_.front().x; }
  double upper() const { return atoms_.back().x; }
  double mean() const { return moment_[0]; }
  // mu({r}) for r the top of the support, and its reciprocal b = 1/mu({r}).
  double top_mass() const { return atoms_.back().p; }
  double hl_barrier() const { return 1.0 / top_mass(); }

  double tail(double x) const;
  double tail_open(double x) const;  // mu((x, inf))
  double cdf(double x) const { return 1.0 - tail_open(x); }
  double tail_quantile(double lambda) const;
  // Q(l) = integral of the tail quantile over (0, l].
  double integrated_quantile(double lambda) const;
  double avar(double lambda) const;
  double avar_via_calls(double lambda) const;
  double call(double strike) const;
  double barycentre(double x) const;

  // Suffix sums over atoms i..n-1; index n gives zero.
  double suffix_mass(std::size_t i) const { return mass_[i]; }
  double suffix_moment(std::size_t i) const { return moment_[i]; }

  // Index of the atom carrying q(lambda), i.e. the largest i with suffix_mass(i) >= lambda.
  std::size_t quantile_index(double lambda) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> mass_;
  std::vector<double> moment_;
};

// One piece of the integrated tail quantile: Q(l) = a + b*l + c*ln(l) on
// (lo, hi], so the tail quantile there is b + c/l. Atomic measures give c = 0;
// Hardy-Littlewood transforms of atomic measures give c >= 0.
struct QuantileSegment {
  double lo;
  double hi;
  double a;
  double b;
  double c;

  double q(double lambda) const { return c == 0.0 ? b : b + c / lambda; }
  double Q(double lambda) const;
};

// Measure described by its integrated tail quantile, piecewise closed form.
// The first segment must have c = 0, so the top of the support is finite.
class QuantileProfile {
 public:
  explicit QuantileProfile(std::vector<QuantileSegment> segments);
  static QuantileProfile from_measure(const AtomicMeasure& mu);

  const std::vector<QuantileSegment>& segments() const { return segments_; }

  double integrated_quantile(double lambda) const;
  double tail_quantile(double lambda) const;
  double tail_quantile_right(double lambda) const;  // q(lambda+), lambda in [0,1)
  double avar(double lambda) const;
  double tail(double y) const;
  double tail_open(double y) const;
  double cdf(double y) const { return 1.0 - tail_open(y); }
  double call(double strike) const;
  double mean() const { return integrated_quantile(1.0); }
  double upper() const { return segments_.front().b; }
  double lower() const { return segments_.back().q(1.0); }
  bool bounded_top() const { return true; }

  // Jump points and kinks of the tail function, ascending.
  std::vector<double> tail_breakpoints() const;
  bool is_atomic() const;
  AtomicMeasure to_atomic() const;

 private:
  std::size_t segment_index(double lambda) const;
  template <class Cmp>
  double tail_impl(double y, Cmp ge) const;

  std::vector<QuantileSegment> segments_;
};

AtomicMeasure shifted(const AtomicMeasure& mu, double c);

// N-cell quantile discretizations of parametric laws. Each atom sits at the
// average tail quantile over its cell, so Q is exact at the cell boundaries
// and the mean is preserved.
AtomicMeasure discretize_pareto(double shape, double location, std::size_t n = 1000);
AtomicMeasure discretize_uniform(double a, double b, std::size_t n = 1000);

}  // namespace aykit
