#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "aykit/measure.hpp"

namespace aykit {

// Hardy-Littlewood transform: the law whose tail quantile is avar(mu, .).
// Exact; on the cell of atom x_i its tail quantile is x_i + c_i/l.
QuantileProfile hl_transform(const AtomicMeasure& mu);

// Tail of the Hardy-Littlewood transform from calls:
// inf over z > 0 of C(y - z)/z, for y in (mean, upper).
double hl_tail_dual(const AtomicMeasure& mu, double y);

struct ConcaveVertex {
  double lambda;
  double g;
};

// Piecewise linear concave G on [0,1] with G(0) = 0, given by its vertices.
class PiecewiseLinearConcave {
 public:
  explicit PiecewiseLinearConcave(std::vector<ConcaveVertex> vertices);
  const std::vector<ConcaveVertex>& vertices() const { return vertices_; }
  double operator()(double lambda) const;
  std::vector<double> slopes() const;

 private:
  std::vector<ConcaveVertex> vertices_;
};

// Concave envelope of l -> l*q(l). Exact for these profiles: on each segment
// l*q(l) = b*l + c is affine, so the hull of the segment endpoints is the
// envelope.
PiecewiseLinearConcave concave_envelope(const QuantileProfile& nu);

AtomicMeasure delta_operator(const QuantileProfile& nu);
AtomicMeasure delta_operator(const AtomicMeasure& nu);

// General tail quantile sampled on a log-spaced grid of `points` levels in
// [lambda_min, 1]. Throws NoSolutionError unless l*q(l) -> 0 as l -> 0.
AtomicMeasure delta_operator(const std::function<double(double)>& tail_quantile,
                             std::size_t points = 4096, double lambda_min = 1e-9);

// G~(x) = sup over l of (l*q(l) - l*x), and the tail recovered from its left derivative.
double pseudo_fenchel(const QuantileProfile& nu, double x);
double delta_tail_via_fenchel(const QuantileProfile& nu, double x);

struct OrderVerdict {
  bool holds;
  double worst_gap;
  double witness;
};

// min over y of tail_rho(y) - tail_nu(y). Exact: besides every breakpoint
// (both one-sided values) the interior stationary points of the hyperbolic
// pieces are checked.
OrderVerdict stochastic_dominates(const QuantileProfile& rho, const QuantileProfile& nu,
                                  double tolerance = 1e-12);
OrderVerdict stochastic_dominates(const AtomicMeasure& rho, const AtomicMeasure& nu,
                                  double tolerance = 1e-12);
// min over K of C_rho(K) - C_nu(K), same evaluation scheme.
OrderVerdict icx_dominates(const QuantileProfile& rho, const QuantileProfile& nu,
                           double tolerance = 1e-12);
OrderVerdict icx_dominates(const AtomicMeasure& rho, const AtomicMeasure& nu,
                           double tolerance = 1e-12);

}  // namespace aykit
