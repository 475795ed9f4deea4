#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "aykit/profile.hpp"

namespace aykit {

// A path on a strictly increasing grid starting at t = 0. Suprema are taken
// over grid points only. When stop_index is set the values after it are
// constant.
class Path {
 public:
  Path(std::vector<double> times, std::vector<double> values,
       std::optional<std::size_t> stop_index = std::nullopt);
  static Path uniform(std::vector<double> values, double dt,
                      std::optional<std::size_t> stop_index = std::nullopt);

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::optional<std::size_t> stop_index() const { return stop_; }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  std::optional<std::size_t> stop_;
};

enum class StopKind { hit_barrier, hit_zero, breach, horizon_censored };

const char* to_string(StopKind kind);

struct StopEvent {
  StopKind kind;
  std::size_t index;
  double level;
};

Path running_sup(const Path& p);

// M_t = U(Xbar_t) - u(Xbar_t)(Xbar_t - X_t), stopped at the first grid index
// where Xbar reaches the barrier (there M = U(b), the u(b) = 0 convention).
Path ay_closed_form(const Path& p, const Profile& prof);
// a* + sum of u(Xbar_{t_i})(X_{t_{i+1}} - X_{t_i}), left-point.
Path ay_integral_form(const Path& p, const Profile& prof);
// Undo ay_closed_form(., prof) using the swapped profile.
Path ay_inverse(const Path& m, const ProfilePtr& prof);

StopEvent detect_barrier(const Path& p, double level);
StopEvent detect_zero(const Path& p);
StopEvent detect_breach(const Path& p, const std::function<double(double)>& w);

struct StopRule {
  StopKind kind;
  double level = 0.0;
  std::function<double(double)> drawdown;
};

StopEvent detect_stop(const Path& p, const StopRule& rule);

}  // namespace aykit
