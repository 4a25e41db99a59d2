#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "vssd/errors.hpp"
#include "vssd/params.hpp"

namespace vssd {

/// Time-to-current-density map. Either a constant C-rate (signed by the
/// cycle direction, discharge positive) or a piecewise-constant schedule.
/// Steps are intentionally not differentiated analytically; the observer
/// smooths them.
class CurrentProfile {
 public:
  enum class Kind { ConstantCRate, PiecewiseSchedule };

  static CurrentProfile constant_rate(double rate, Direction dir,
                                      const ParameterSet& p) {
    if (!(rate >= 0.0) || !std::isfinite(rate))
      throw ConfigError("C-rate must be nonnegative and finite");
    CurrentProfile pr;
    pr.kind_ = Kind::ConstantCRate;
    pr.rate_ = rate;
    pr.current_ = rate * p.i_1c() * (dir == Direction::Discharge ? 1.0 : -1.0);
    pr.i_1c_ = p.i_1c();
    return pr;
  }

  /// points are (t_start [s], I [A/m^2]); times strictly increasing,
  /// first at t = 0. The last value holds beyond the schedule end.
  static CurrentProfile schedule(std::vector<std::pair<double, double>> points,
                                 const ParameterSet& p) {
    if (points.empty()) throw ConfigError("schedule needs at least one step");
    if (points.front().first != 0.0)
      throw ConfigError("schedule must start at t = 0");
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
      if (!(points[i].first < points[i + 1].first))
        throw ConfigError("schedule times must be strictly increasing");
    for (auto& [t, v] : points)
      if (!std::isfinite(t) || !std::isfinite(v))
        throw ConfigError("schedule entries must be finite");
    CurrentProfile pr;
    pr.kind_ = Kind::PiecewiseSchedule;
    pr.points_ = std::move(points);
    pr.i_1c_ = p.i_1c();
    return pr;
  }

  Kind kind() const { return kind_; }

  /// Applied current density at time t [A/m^2].
  double eval(double t) const {
    if (t < 0.0) throw ConfigError("profile evaluated at negative time");
    if (kind_ == Kind::ConstantCRate) return current_;
    std::size_t i = 0;
    while (i + 1 < points_.size() && points_[i + 1].first <= t) ++i;
    return points_[i].second;  // holds last value beyond the end
  }

  /// |I|/I_1C at time t, used for the rate-corrections lookup.
  double rate_at(double t) const {
    if (kind_ == Kind::ConstantCRate) return rate_;
    return std::abs(eval(t)) / i_1c_;
  }

  /// Next discontinuity strictly after t (infinity when none).
  double next_breakpoint(double t) const {
    if (kind_ == Kind::ConstantCRate)
      return std::numeric_limits<double>::infinity();
    for (const auto& [tb, v] : points_)
      if (tb > t + 1e-12) return tb;
    return std::numeric_limits<double>::infinity();
  }

  double end_time() const {
    if (kind_ == Kind::ConstantCRate)
      return std::numeric_limits<double>::infinity();
    return points_.back().first;
  }

 private:
  Kind kind_ = Kind::ConstantCRate;
  double rate_ = 0.0;
  double current_ = 0.0;
  double i_1c_ = 1.0;
  std::vector<std::pair<double, double>> points_;
};

}  // namespace vssd
