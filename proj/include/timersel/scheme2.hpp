#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "timersel/analysis.hpp"
#include "timersel/model.hpp"
#include "timersel/scheme1.hpp"

// Expected-selection-time minimization under a success-probability floor.
//
// Inner problem: for fixed lambda >= 0 minimize the auxiliary value
// L = Gamma - lambda * P. Finite k uses the first-order recursion
//
//   alpha0(level n) = (delta + lambda + L*_{n-1}) / (delta + lambda*k + L*_{n-1})
//
// with the level-0 head 1/k and L*_0 = -lambda * (1 - 1/k)^(k-1); the other
// intervals are the previous level's scaled by (1 - alpha0), as in scheme 1.
// Limits: lambda -> 0 collapses to the all-at-zero mapping, lambda -> inf
// recovers the scheme-1 intervals. The k -> infinity form is
// beta_N = 1, beta_j = 1 - exp(-beta_{j+1}) + delta/lambda.
//
// Outer problem: find lambda* with P(lambda*) = eta by bracketed bisection
// (doubling from delta for the upper end). P(lambda) is assumed
// non-decreasing; the bracket is validated each step and any detected
// non-monotonicity switches to a golden-section scan over log(lambda) that
// minimizes |P - eta|. The returned solution records which path ran.

namespace timersel {

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(double eta, double p_max)
      : std::runtime_error("constraint eta=" + std::to_string(eta) +
                           " exceeds the maximum achievable success probability " +
                           std::to_string(p_max)),
        eta_(eta),
        p_max_(p_max) {}

  double eta() const { return eta_; }
  double p_max() const { return p_max_; }

 private:
  double eta_;
  double p_max_;
};

enum class LambdaSearch { Direct, Bisection, GoldenSectionFallback };

struct Scheme2Solution {
  DiscreteMapping mapping;
  double lambda = 0.0;
  double p_success = 0.0;
  double expected_time = 0.0;
  double auxiliary = 0.0;
  LambdaSearch search = LambdaSearch::Direct;
};

struct Scheme2AsymptoticSolution {
  AsymptoticMapping mapping;
  double lambda = 0.0;
  double p_success = 0.0;
  double expected_time = 0.0;
  double auxiliary = 0.0;
  LambdaSearch search = LambdaSearch::Direct;
};

namespace detail {

inline std::vector<double> scheme2_alphas(int k, int n_slots, double delta, double lambda) {
  if (lambda == 0.0) {
    // minimizing Gamma alone: everyone transmits immediately
    std::vector<double> alphas(static_cast<std::size_t>(n_slots) + 1, 0.0);
    alphas[0] = 1.0;
    return alphas;
  }
  std::vector<double> alphas{1.0 / k};
  double aux = -lambda * pow_one_minus(1.0 / k, k - 1);
  for (int level = 1; level <= n_slots; ++level) {
    const double head = (delta + lambda + aux) / (delta + lambda * k + aux);
    std::vector<double> next(alphas.size() + 1);
    next[0] = head;
    for (std::size_t j = 0; j < alphas.size(); ++j) next[j + 1] = (1.0 - head) * alphas[j];
    alphas = std::move(next);
    aux = expected_selection_time(alphas, k, delta) -
          lambda * success_probability(alphas, k);
  }
  return alphas;
}

inline std::vector<double> scheme2_betas(int n_slots, double delta, double lambda) {
  std::vector<double> betas(static_cast<std::size_t>(n_slots) + 1);
  betas[n_slots] = 1.0;
  for (int j = n_slots - 1; j >= 0; --j)
    betas[j] = -std::expm1(-betas[j + 1]) + delta / lambda;
  return betas;
}

// Bracketed bisection on g(lambda) = p(lambda) - eta, with the fallback
// described above. p_of_lambda must accept any lambda > 0; p(0) is passed
// separately because the asymptotic recursion is undefined there.
inline std::pair<double, LambdaSearch> equalize_lambda(
    double eta, double delta, double p_at_zero,
    const std::function<double(double)>& p_of_lambda) {
  constexpr double kGapTol = 1e-9;
  constexpr int kMaxIter = 256;

  double lo = 0.0, p_lo = p_at_zero;
  double hi = delta, p_hi = p_of_lambda(hi);
  int doublings = 0;
  while (p_hi < eta) {
    if (++doublings > 120)
      throw std::runtime_error("equalize_lambda: bracket doubling failed to reach eta");
    lo = hi;
    p_lo = p_hi;
    hi *= 2.0;
    p_hi = p_of_lambda(hi);
  }
  if (std::abs(p_hi - eta) < kGapTol) return {hi, LambdaSearch::Bisection};

  for (int iter = 0; iter < kMaxIter; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double p_mid = p_of_lambda(mid);
    if (p_mid < p_lo - kGapTol || p_mid > p_hi + kGapTol) {
      // p(lambda) is not monotone on this bracket: scan instead
      double a = std::log(std::max(lo, delta * 1e-12));
      double b = std::log(hi);
      const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
      double f1 = std::abs(p_of_lambda(std::exp(x1)) - eta);
      double f2 = std::abs(p_of_lambda(std::exp(x2)) - eta);
      for (int g = 0; g < 200 && b - a > 1e-13; ++g) {
        if (f1 <= f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - ratio * (b - a);
          f1 = std::abs(p_of_lambda(std::exp(x1)) - eta);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + ratio * (b - a);
          f2 = std::abs(p_of_lambda(std::exp(x2)) - eta);
        }
      }
      double best = std::exp(0.5 * (a + b));
      if (p_of_lambda(best) < eta - kGapTol) best = hi;  // stay on the feasible side
      return {best, LambdaSearch::GoldenSectionFallback};
    }
    if (std::abs(p_mid - eta) < kGapTol) return {mid, LambdaSearch::Bisection};
    if (p_mid < eta) {
      lo = mid;
      p_lo = p_mid;
    } else {
      hi = mid;
      p_hi = p_mid;
    }
    if (hi - lo < 1e-12 * hi) break;
  }
  return {hi, LambdaSearch::Bisection};  // hi side satisfies the constraint
}

}  // namespace detail

inline Scheme2Solution minimize_auxiliary_finite(int k, int n_slots, double delta,
                                                 double lambda) {
  if (k < 1) throw std::invalid_argument("minimize_auxiliary_finite: k must be >= 1");
  if (n_slots < 0) throw std::invalid_argument("minimize_auxiliary_finite: n_slots must be >= 0");
  if (!(delta > 0.0)) throw std::invalid_argument("minimize_auxiliary_finite: delta must be > 0");
  if (!(lambda >= 0.0)) throw std::invalid_argument("minimize_auxiliary_finite: lambda must be >= 0");
  std::vector<double> alphas = detail::scheme2_alphas(k, n_slots, delta, lambda);
  const AnalysisResult r = analyze(alphas, k, delta, lambda);
  SelectionParams params = derive_params(k, delta, n_slots * delta);
  params.n_slots = n_slots;
  return Scheme2Solution{DiscreteMapping(params, std::move(alphas)),
                         lambda,
                         r.success_prob,
                         r.expected_time,
                         *r.auxiliary_value,
                         LambdaSearch::Direct};
}

inline Scheme2AsymptoticSolution minimize_auxiliary_asymptotic(int n_slots, double delta,
                                                               double lambda) {
  if (n_slots < 0)
    throw std::invalid_argument("minimize_auxiliary_asymptotic: n_slots must be >= 0");
  if (!(delta > 0.0))
    throw std::invalid_argument("minimize_auxiliary_asymptotic: delta must be > 0");
  if (!(lambda > 0.0))
    throw std::invalid_argument(
        "minimize_auxiliary_asymptotic: lambda must be > 0 (the all-at-zero mapping "
        "covers lambda == 0)");
  std::vector<double> betas = detail::scheme2_betas(n_slots, delta, lambda);
  const double p = asymptotic_success_probability(betas);
  const double gamma = asymptotic_expected_time(betas, delta);
  return Scheme2AsymptoticSolution{AsymptoticMapping(n_slots, std::move(betas)),
                                   lambda,
                                   p,
                                   gamma,
                                   gamma - lambda * p,
                                   LambdaSearch::Direct};
}

inline Scheme2Solution solve_constrained_finite(int k, int n_slots, double delta,
                                                double eta) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("solve_constrained_finite: eta must lie in [0,1]");
  const double p_max = optimize_finite(k, n_slots, delta).p_star;
  if (eta > p_max) throw InfeasibleError(eta, p_max);

  const double p_at_zero = (k == 1) ? 1.0 : 0.0;
  if (eta <= p_at_zero) return minimize_auxiliary_finite(k, n_slots, delta, 0.0);

  auto p_of = [&](double lambda) {
    return success_probability(detail::scheme2_alphas(k, n_slots, delta, lambda), k);
  };
  auto [lambda_star, search] = detail::equalize_lambda(eta, delta, p_at_zero, p_of);
  Scheme2Solution s = minimize_auxiliary_finite(k, n_slots, delta, lambda_star);
  s.search = search;
  return s;
}

inline Scheme2AsymptoticSolution solve_constrained_asymptotic(int n_slots, double delta,
                                                              double eta) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("solve_constrained_asymptotic: eta must lie in [0,1]");
  const double p_max = optimize_asymptotic(n_slots).p_star;
  if (eta > p_max) throw InfeasibleError(eta, p_max);

  auto p_of = [&](double lambda) {
    return asymptotic_success_probability(detail::scheme2_betas(n_slots, delta, lambda));
  };
  auto [lambda_star, search] = detail::equalize_lambda(eta, delta, /*p_at_zero=*/0.0, p_of);
  Scheme2AsymptoticSolution s = minimize_auxiliary_asymptotic(n_slots, delta, lambda_star);
  s.search = search;
  return s;
}

}  // namespace timersel
