#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "timersel/model.hpp"
#include "timersel/simulator.hpp"

// Inverse-metric baseline f(mu) = c/mu with a one-dimensional Monte Carlo
// optimization of c. All evaluations share one seed (common random numbers)
// so the objective is a deterministic function of c and repeated runs pick
// the same c_star.

namespace timersel {

class ConstraintUnmeetableError : public std::runtime_error {
 public:
  ConstraintUnmeetableError(double eta, double best_p)
      : std::runtime_error("no c in the search bracket reaches success probability " +
                           std::to_string(eta) + " (best " + std::to_string(best_p) + ")"),
        eta_(eta),
        best_p_(best_p) {}

  double eta() const { return eta_; }
  double best_p() const { return best_p_; }

 private:
  double eta_;
  double best_p_;
};

enum class BaselineGoal { MaximizeSuccess, MinimizeTimeAtConstraint };

struct BaselineConfig {
  MetricDistribution distribution = MetricDistribution::uniform01();
  BaselineGoal goal = BaselineGoal::MaximizeSuccess;
  double eta = 0.0;  // success floor for MinimizeTimeAtConstraint
  int search_budget = 60;
  std::uint64_t trials_per_eval = 100000;
  std::uint64_t final_trials = 1000000;
  std::uint64_t seed = 0;
  TimeConvention convention = TimeConvention::CapAtNSlots;
};

struct BaselineResult {
  double c_star = 0.0;
  double value = 0.0;     // success probability or mean time, per goal
  double value_se = 0.0;  // from the final re-evaluation
  double success_prob = 0.0;
  double success_se = 0.0;
  double mean_time = 0.0;
  double time_se = 0.0;
  bool used_grid_fallback = false;
};

inline ContinuousMapping inverse_mapping(double c, const MetricDistribution& dist,
                                         double t_max) {
  return ContinuousMapping(c, dist, t_max);
}

namespace detail {

struct CEval {
  double score = 0.0;  // minimized
  SimStats stats;
};

inline CEval evaluate_c(double c, const BaselineConfig& config,
                        const SelectionParams& params, std::uint64_t trials) {
  const ContinuousMapping mapping = inverse_mapping(c, config.distribution, params.t_max);
  const SimStats stats = estimate(mapping, params, trials, config.seed, config.convention);
  CEval ev;
  ev.stats = stats;
  if (config.goal == BaselineGoal::MaximizeSuccess) {
    ev.score = -stats.success_prob;
  } else if (stats.success_prob >= config.eta) {
    ev.score = stats.mean_time;
  } else {
    // infeasible: dominated by every feasible point, sloped toward feasibility
    const double cap = stop_time_cap(params, config.convention);
    ev.score = cap * (1.0 + 10.0 * (config.eta - stats.success_prob));
  }
  return ev;
}

}  // namespace detail

inline BaselineResult optimize_c(const BaselineConfig& config, const SelectionParams& params) {
  if (config.search_budget < 3)
    throw std::invalid_argument("optimize_c: search_budget must be >= 3");
  if (config.trials_per_eval < 1000)
    throw std::invalid_argument("optimize_c: trials_per_eval must be >= 1000");
  if (!(params.t_max > 0.0))
    throw std::invalid_argument("optimize_c: t_max must be > 0 for the c bracket");
  if (config.goal == BaselineGoal::MinimizeTimeAtConstraint &&
      !(config.eta >= 0.0 && config.eta <= 1.0))
    throw std::invalid_argument("optimize_c: eta must lie in [0,1]");

  const double a0 = std::log10(params.delta * 1e-3);
  const double b0 = std::log10(params.t_max * 1e3);

  double best_x = a0;
  double best_score = 0.0;
  double best_p = 0.0;
  bool have_best = false;
  auto probe = [&](double x) {
    const detail::CEval ev =
        detail::evaluate_c(std::pow(10.0, x), config, params, config.trials_per_eval);
    if (!have_best || ev.score < best_score) {
      have_best = true;
      best_score = ev.score;
      best_x = x;
    }
    if (ev.stats.success_prob > best_p) best_p = ev.stats.success_prob;
    return ev.score;
  };

  probe(a0);
  probe(b0);

  // golden section over log10(c)
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = a0, b = b0;
  double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
  double f1 = probe(x1), f2 = probe(x2);
  for (int used = 4; used < config.search_budget; ++used) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = probe(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = probe(x2);
    }
  }

  BaselineResult result;
  if (best_x == a0 || best_x == b0) {
    // an endpoint beat the interior: not unimodal on the bracket, scan instead
    result.used_grid_fallback = true;
    for (int i = 0; i < 200; ++i) {
      probe(a0 + (b0 - a0) * static_cast<double>(i) / 199.0);
    }
  }

  if (config.goal == BaselineGoal::MinimizeTimeAtConstraint && best_p < config.eta)
    throw ConstraintUnmeetableError(config.eta, best_p);

  result.c_star = std::pow(10.0, best_x);
  const detail::CEval final_ev =
      detail::evaluate_c(result.c_star, config, params, config.final_trials);
  result.success_prob = final_ev.stats.success_prob;
  result.success_se = final_ev.stats.success_se;
  result.mean_time = final_ev.stats.mean_time;
  result.time_se = final_ev.stats.time_se;
  if (config.goal == BaselineGoal::MaximizeSuccess) {
    result.value = final_ev.stats.success_prob;
    result.value_se = final_ev.stats.success_se;
  } else {
    result.value = final_ev.stats.mean_time;
    result.value_se = final_ev.stats.time_se;
  }
  return result;
}

}  // namespace timersel
