#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "timersel/numeric.hpp"

// Core domain types for timer-based best-node selection.
//
// Conventions used throughout:
//   - metrics live on the uniform [0,1) scale; raw metric distributions
//     enter only through MetricDistribution::cdf/quantile,
//   - a timer value is std::optional<double>: nullopt means the node does
//     not transmit at all (its timer would exceed t_max),
//   - metric intervals are half-open, closed at the lower end; a metric
//     exactly on a boundary takes the smaller timer value.

namespace timersel {

using TimerValue = std::optional<double>;

// Sum slack tolerated when validating interval-length vectors.
inline constexpr double kAlphaSumTol = 1e-12;

// Contention-window geometry: k nodes, vulnerability window delta,
// selection deadline t_max, and the derived slot count N.
struct SelectionParams {
  int k = 1;               // number of contending nodes
  double delta = 1.0;      // vulnerability window, seconds
  double t_max = 0.0;      // maximum selection duration, seconds
  long long n_slots = 0;   // N = floor(t_max / delta)
};

inline SelectionParams derive_params(int k, double delta, double t_max) {
  if (k < 1) throw std::invalid_argument("derive_params: k must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("derive_params: delta must be > 0");
  if (!(t_max >= 0.0)) throw std::invalid_argument("derive_params: t_max must be >= 0");
  const double quotient = std::floor(t_max / delta);
  if (quotient > 9e15)
    throw std::invalid_argument("derive_params: t_max/delta exceeds the representable slot count");
  SelectionParams p;
  p.k = k;
  p.delta = delta;
  p.t_max = t_max;
  p.n_slots = static_cast<long long>(quotient);
  return p;
}

inline void validate_alphas(std::span<const double> alphas) {
  if (alphas.empty()) throw std::invalid_argument("alphas: empty vector");
  double total = 0.0;
  for (double a : alphas) {
    if (!(a >= 0.0)) throw std::invalid_argument("alphas: negative interval length");
    total += a;
  }
  if (total > 1.0 + kAlphaSumTol)
    throw std::invalid_argument("alphas: interval lengths sum to more than 1");
}

// Discrete metric-to-timer mapping: interval j (counted from the top of the
// uniform scale) has length alphas[j] and maps to timer value j*delta.
// Metrics below 1 - sum(alphas) do not transmit.
class DiscreteMapping {
 public:
  DiscreteMapping(SelectionParams params, std::vector<double> alphas)
      : params_(params), alphas_(std::move(alphas)) {
    validate_alphas(alphas_);
    if (static_cast<long long>(alphas_.size()) != params_.n_slots + 1)
      throw std::invalid_argument("DiscreteMapping: need exactly N+1 interval lengths");
    // lower_edge_[j] = 1 - sum_{i<=j} alphas[i], non-increasing in j
    lower_edge_.resize(alphas_.size());
    double prefix = 0.0;
    for (std::size_t j = 0; j < alphas_.size(); ++j) {
      prefix += alphas_[j];
      lower_edge_[j] = 1.0 - prefix;
    }
  }

  const SelectionParams& params() const { return params_; }
  const std::vector<double>& alphas() const { return alphas_; }
  double no_transmit_mass() const { return std::max(0.0, lower_edge_.back()); }

  TimerValue timer_for(double u) const {
    if (!(u >= 0.0 && u < 1.0))
      throw std::invalid_argument("timer_for: metric outside [0,1)");
    // smallest j with lower_edge_[j] <= u; edges are sorted descending
    auto it = std::lower_bound(lower_edge_.begin(), lower_edge_.end(), u,
                               [](double edge, double value) { return edge > value; });
    if (it == lower_edge_.end()) return std::nullopt;
    const auto j = static_cast<double>(it - lower_edge_.begin());
    return j * params_.delta;
  }

 private:
  SelectionParams params_;
  std::vector<double> alphas_;
  std::vector<double> lower_edge_;
};

// Normalized interval lengths beta_j = k*alpha_j in the k -> infinity limit.
struct AsymptoticMapping {
  int n_slots = 0;
  std::vector<double> betas;

  AsymptoticMapping(int n, std::vector<double> b) : n_slots(n), betas(std::move(b)) {
    if (static_cast<int>(betas.size()) != n_slots + 1)
      throw std::invalid_argument("AsymptoticMapping: need exactly N+1 lengths");
    for (double beta : betas)
      if (!(beta > 0.0))
        throw std::invalid_argument("AsymptoticMapping: lengths must be positive");
  }
};

enum class DistKind { Uniform01, Exponential, Rayleigh, Tabulated };

// CDF / quantile pair for raw suitability metrics. Tabulated CDFs use
// monotone linear interpolation and clamp outside the table range.
class MetricDistribution {
 public:
  static MetricDistribution uniform01() { return MetricDistribution(DistKind::Uniform01, 0.0); }

  static MetricDistribution exponential(double mean) {
    if (!(mean > 0.0)) throw std::invalid_argument("exponential: mean must be > 0");
    return MetricDistribution(DistKind::Exponential, mean);
  }

  static MetricDistribution rayleigh(double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("rayleigh: scale must be > 0");
    return MetricDistribution(DistKind::Rayleigh, scale);
  }

  static MetricDistribution tabulated(std::vector<std::pair<double, double>> points) {
    if (points.size() < 2) throw std::invalid_argument("tabulated: need at least 2 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].second < 0.0 || points[i].second > 1.0)
        throw std::invalid_argument("tabulated: F values must lie in [0,1]");
      if (i > 0 && !(points[i].first > points[i - 1].first &&
                     points[i].second > points[i - 1].second))
        throw std::invalid_argument("tabulated: x and F must be strictly increasing");
    }
    MetricDistribution d(DistKind::Tabulated, 0.0);
    d.table_ = std::move(points);
    return d;
  }

  DistKind kind() const { return kind_; }
  double param() const { return param_; }

  // F_c(x); clamped_out (optional) reports a tabulated out-of-range input.
  double cdf(double x, bool* clamped_out = nullptr) const {
    if (clamped_out) *clamped_out = false;
    switch (kind_) {
      case DistKind::Uniform01:
        return std::clamp(x, 0.0, 1.0);
      case DistKind::Exponential:
        return x <= 0.0 ? 0.0 : -std::expm1(-x / param_);
      case DistKind::Rayleigh:
        return x <= 0.0 ? 0.0 : -std::expm1(-x * x / (2.0 * param_ * param_));
      case DistKind::Tabulated: {
        if (x <= table_.front().first) {
          if (clamped_out && x < table_.front().first) *clamped_out = true;
          return table_.front().second;
        }
        if (x >= table_.back().first) {
          if (clamped_out && x > table_.back().first) *clamped_out = true;
          return table_.back().second;
        }
        auto it = std::upper_bound(table_.begin(), table_.end(), x,
                                   [](double v, const auto& p) { return v < p.first; });
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double t = (x - lo.first) / (hi.first - lo.first);
        return lo.second + t * (hi.second - lo.second);
      }
    }
    return 0.0;  // unreachable
  }

  // inverse CDF on [0,1)
  double quantile(double u) const {
    if (!(u >= 0.0 && u < 1.0))
      throw std::invalid_argument("quantile: argument outside [0,1)");
    switch (kind_) {
      case DistKind::Uniform01:
        return u;
      case DistKind::Exponential:
        return -param_ * std::log1p(-u);
      case DistKind::Rayleigh:
        return param_ * std::sqrt(-2.0 * std::log1p(-u));
      case DistKind::Tabulated: {
        if (u <= table_.front().second) return table_.front().first;
        if (u >= table_.back().second) return table_.back().first;
        auto it = std::upper_bound(table_.begin(), table_.end(), u,
                                   [](double v, const auto& p) { return v < p.second; });
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double t = (u - lo.second) / (hi.second - lo.second);
        return lo.first + t * (hi.first - lo.first);
      }
    }
    return 0.0;  // unreachable
  }

 private:
  MetricDistribution(DistKind kind, double param) : kind_(kind), param_(param) {}

  DistKind kind_;
  double param_;  // mean (exponential) or scale (rayleigh)
  std::vector<std::pair<double, double>> table_;
};

// Probability integral transform: F_c(raw_metric) is uniform on [0,1] for
// continuous F_c, which reduces any metric distribution to the uniform case.
inline double uniformize(const MetricDistribution& dist, double raw_metric,
                         bool* clamped_out = nullptr) {
  return dist.cdf(raw_metric, clamped_out);
}

// Named monotone non-increasing continuous rule. The only built-in rule is
// the inverse-metric mapping f(mu) = c/mu with mu = quantile(dist, u).
class ContinuousMapping {
 public:
  ContinuousMapping(double c, MetricDistribution dist, double t_max)
      : c_(c), dist_(std::move(dist)), t_max_(t_max) {
    if (!(c > 0.0)) throw std::invalid_argument("ContinuousMapping: c must be > 0");
    if (!(t_max >= 0.0)) throw std::invalid_argument("ContinuousMapping: t_max must be >= 0");
  }

  double c() const { return c_; }
  double t_max() const { return t_max_; }
  const MetricDistribution& distribution() const { return dist_; }

  TimerValue timer_for(double u) const {
    if (!(u >= 0.0 && u < 1.0))
      throw std::invalid_argument("timer_for: metric outside [0,1)");
    const double mu = dist_.quantile(u);
    // non-positive metrics sit below the mu -> 0+ limit, where the timer is
    // already past any deadline
    if (mu <= 0.0) return std::nullopt;
    const double t = c_ / mu;
    if (!(t <= t_max_)) return std::nullopt;
    return t;
  }

 private:
  double c_;
  MetricDistribution dist_;
  double t_max_;
};

template <typename M>
concept TimerMapping = requires(const M& m, double u) {
  { m.timer_for(u) } -> std::convertible_to<TimerValue>;
};

// NoTransmit sorts after every real timer value.
inline bool timer_less(const TimerValue& a, const TimerValue& b) {
  if (!b) return a.has_value();
  if (!a) return false;
  return *a < *b;
}

}  // namespace timersel
