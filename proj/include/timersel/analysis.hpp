#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "timersel/model.hpp"
#include "timersel/numeric.hpp"

// Closed-form performance of an arbitrary (not necessarily optimal)
// interval-length vector, finite-k and k -> infinity forms.
//
//   P(alpha; k)      = k * sum_l alpha_l * (1 - sum_{j<=l} alpha_j)^(k-1)
//   Gamma(alpha; k)  = delta * sum_{l<N} (1 - sum_{j<=l} alpha_j)^k
//   L(alpha; k, lam) = Gamma - lam * P
//   P(beta)          = sum_l beta_l * exp(-sum_{j<=l} beta_j)
//   Gamma(beta)      = delta * sum_{l<N} exp(-sum_{j<=l} beta_j)
//
// Gamma caps the no-transmission case at N*delta, which is exactly what the
// simulator's CapAtNSlots stop-time convention measures.

namespace timersel {

inline double success_probability(std::span<const double> alphas, int k) {
  if (k < 1) throw std::invalid_argument("success_probability: k must be >= 1");
  validate_alphas(alphas);
  CompensatedSum total;
  double prefix = 0.0;
  for (double alpha : alphas) {
    prefix += alpha;
    total.add(alpha * pow_one_minus(prefix, k - 1));
  }
  return static_cast<double>(k) * total.value();
}

inline double expected_selection_time(std::span<const double> alphas, int k, double delta) {
  if (k < 1) throw std::invalid_argument("expected_selection_time: k must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("expected_selection_time: delta must be > 0");
  validate_alphas(alphas);
  CompensatedSum total;
  double prefix = 0.0;
  for (std::size_t l = 0; l + 1 < alphas.size(); ++l) {
    prefix += alphas[l];
    total.add(pow_one_minus(prefix, k));
  }
  return delta * total.value();
}

inline double auxiliary_value(std::span<const double> alphas, int k, double delta,
                              double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("auxiliary_value: lambda must be >= 0");
  return expected_selection_time(alphas, k, delta) - lambda * success_probability(alphas, k);
}

inline void validate_betas(std::span<const double> betas) {
  if (betas.empty()) throw std::invalid_argument("betas: empty vector");
  for (double beta : betas)
    if (!(beta > 0.0)) throw std::invalid_argument("betas: lengths must be positive");
}

inline double asymptotic_success_probability(std::span<const double> betas) {
  validate_betas(betas);
  CompensatedSum total;
  double prefix = 0.0;
  for (double beta : betas) {
    prefix += beta;
    total.add(beta * std::exp(-prefix));
  }
  return total.value();
}

inline double asymptotic_expected_time(std::span<const double> betas, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("asymptotic_expected_time: delta must be > 0");
  validate_betas(betas);
  CompensatedSum total;
  double prefix = 0.0;
  for (std::size_t l = 0; l + 1 < betas.size(); ++l) {
    prefix += betas[l];
    total.add(std::exp(-prefix));
  }
  return delta * total.value();
}

struct AnalysisResult {
  double success_prob = 0.0;
  double expected_time = 0.0;
  std::optional<double> auxiliary_value;
};

inline AnalysisResult analyze(std::span<const double> alphas, int k, double delta,
                              std::optional<double> lambda = std::nullopt) {
  AnalysisResult r;
  r.success_prob = success_probability(alphas, k);
  r.expected_time = expected_selection_time(alphas, k, delta);
  if (lambda) {
    if (!(*lambda >= 0.0)) throw std::invalid_argument("analyze: lambda must be >= 0");
    r.auxiliary_value = r.expected_time - *lambda * r.success_prob;
  }
  return r;
}

}  // namespace timersel
