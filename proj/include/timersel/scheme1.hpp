#pragma once

#include <cmath>
#include <vector>

#include "timersel/analysis.hpp"
#include "timersel/model.hpp"

// Success-probability-maximizing mappings.
//
// Finite k: level-n head interval alpha0 = (1 - P*_{n-1}) / (k - P*_{n-1}),
// remaining intervals are the level-(n-1) ones scaled by (1 - alpha0),
// seeded with alpha0 at level 0 equal to 1/k. The recursion is unwrapped
// bottom-up so a full N-level table costs O(N^2) with O(N) state, and the
// accumulation order is fixed left-to-right so tables reproduce exactly.
//
// k -> infinity: beta_N = 1, beta_j = 1 - exp(-beta_{j+1}); the optimum
// success probability collapses to exp(-beta_0).

namespace timersel {

struct Scheme1Solution {
  DiscreteMapping mapping;
  double p_star = 0.0;
};

struct Scheme1AsymptoticSolution {
  AsymptoticMapping mapping;
  double p_star = 0.0;
};

inline Scheme1Solution optimize_finite(int k, int n_slots, double delta = 1.0) {
  if (k < 1) throw std::invalid_argument("optimize_finite: k must be >= 1");
  if (n_slots < 0) throw std::invalid_argument("optimize_finite: n_slots must be >= 0");
  if (k == 1) {
    // a lone node always wins; transmit immediately (the head formula is 0/0 here)
    std::vector<double> lone(static_cast<std::size_t>(n_slots) + 1, 0.0);
    lone[0] = 1.0;
    SelectionParams params = derive_params(1, delta, n_slots * delta);
    params.n_slots = n_slots;
    return Scheme1Solution{DiscreteMapping(params, std::move(lone)), 1.0};
  }
  std::vector<double> alphas{1.0 / k};
  alphas.reserve(static_cast<std::size_t>(n_slots) + 1);
  for (int level = 1; level <= n_slots; ++level) {
    const double p_prev = success_probability(alphas, k);
    const double head = (1.0 - p_prev) / (k - p_prev);
    std::vector<double> next(alphas.size() + 1);
    next[0] = head;
    for (std::size_t j = 0; j < alphas.size(); ++j) next[j + 1] = (1.0 - head) * alphas[j];
    alphas = std::move(next);
  }
  const double p_star = success_probability(alphas, k);
  SelectionParams params = derive_params(k, delta, n_slots * delta);
  params.n_slots = n_slots;  // guard against floor(t_max/delta) rounding
  return Scheme1Solution{DiscreteMapping(params, std::move(alphas)), p_star};
}

inline Scheme1AsymptoticSolution optimize_asymptotic(int n_slots) {
  if (n_slots < 0) throw std::invalid_argument("optimize_asymptotic: n_slots must be >= 0");
  std::vector<double> betas(static_cast<std::size_t>(n_slots) + 1);
  betas[n_slots] = 1.0;
  for (int j = n_slots - 1; j >= 0; --j) betas[j] = -std::expm1(-betas[j + 1]);
  const double p_star = std::exp(-betas[0]);
  return Scheme1AsymptoticSolution{AsymptoticMapping(n_slots, std::move(betas)), p_star};
}

}  // namespace timersel
