#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <vector>

#include "timersel/analysis.hpp"
#include "timersel/baseline.hpp"
#include "timersel/scheme1.hpp"
#include "timersel/scheme2.hpp"
#include "timersel/simulator.hpp"

using namespace timersel;

namespace {

std::vector<double> random_alphas(SplitMix64& rng, int n, double min_mass = 0.2) {
  std::vector<double> alphas(static_cast<std::size_t>(n) + 1);
  double remaining = min_mass + (1.0 - min_mass) * rng.next_unit();
  for (std::size_t j = 0; j + 1 < alphas.size(); ++j) {
    alphas[j] = remaining * rng.next_unit();
    remaining -= alphas[j];
  }
  alphas.back() = remaining;
  return alphas;
}

// t(u) = t_max * (1-u)^gamma: monotone non-increasing, always transmits
struct PowerMapping {
  double t_max;
  double gamma;
  TimerValue timer_for(double u) const { return t_max * std::pow(1.0 - u, gamma); }
};

bool same_stats(const SimStats& a, const SimStats& b) {
  return a.trials == b.trials && a.success_prob == b.success_prob &&
         a.success_se == b.success_se && a.mean_time == b.mean_time &&
         a.time_se == b.time_se && a.seed == b.seed && a.convention == b.convention;
}

}  // namespace

TEST_CASE("degenerate mappings") {
  SECTION("lone node always succeeds at time zero") {
    const SelectionParams params = derive_params(1, 1.0, 0.0);
    const DiscreteMapping m(params, {1.0});
    const SimStats stats = estimate(m, params, 5000, 3);
    REQUIRE(stats.success_prob == 1.0);
    REQUIRE(stats.mean_time == 0.0);
  }

  SECTION("all timers at zero never succeed for k >= 2") {
    const SelectionParams params = derive_params(2, 1.0, 0.0);
    const DiscreteMapping m(params, {1.0});
    const SimStats stats = estimate(m, params, 5000, 3);
    REQUIRE(stats.success_prob == 0.0);
  }
}

TEST_CASE("vanishing vulnerability window makes collisions vanish") {
  // inverse mapping, c=1, uniform metric: timer 1/u <= t_max iff u >= 0.1,
  // so success = P(u_max >= 0.1) = 1 - 0.1^2 when delta ~ 0
  const SelectionParams params = derive_params(2, 1e-12, 10.0);
  const ContinuousMapping m(1.0, MetricDistribution::uniform01(), 10.0);
  const SimStats stats = estimate(m, params, 400000, 11, TimeConvention::CapAtTmax);
  REQUIRE_THAT(stats.success_prob,
               Catch::Matchers::WithinAbs(0.99, 4.0 * stats.success_se));
}

TEST_CASE("simulation matches the closed forms on random mappings") {
  SplitMix64 seeder(515151);
  int config = 0;
  for (int k : {2, 5, 20}) {
    for (int n : {0, 5, 20}) {
      for (int rep = 0; rep < 3; ++rep) {
        const std::vector<double> alphas = random_alphas(seeder, n);
        const SelectionParams params = derive_params(k, 1.0, static_cast<double>(n));
        const DiscreteMapping m(params, alphas);
        constexpr std::uint64_t trials = 100000;
        const SimStats stats = estimate(m, params, trials, 9000 + config++);
        const double p = success_probability(alphas, k);
        const double t = expected_selection_time(alphas, k, 1.0);
        INFO("k=" << k << " n=" << n << " p=" << p << " p_hat=" << stats.success_prob);
        // the 10/trials guard covers events too rare to occur at all here,
        // where the estimated standard error collapses to zero
        REQUIRE_THAT(stats.success_prob,
                     Catch::Matchers::WithinAbs(p, 4.0 * stats.success_se + 10.0 / trials));
        REQUIRE_THAT(stats.mean_time,
                     Catch::Matchers::WithinAbs(t, 4.0 * stats.time_se + 10.0 * n / trials));
      }
    }
  }
}

TEST_CASE("constrained scheme-2 mapping simulates to its closed forms") {
  const auto sol = solve_constrained_finite(5, 100, 1.0, 0.7);
  const SelectionParams params = derive_params(5, 1.0, 100.0);
  const SimStats stats = estimate(sol.mapping, params, 200000, 60601);
  REQUIRE_THAT(stats.mean_time,
               Catch::Matchers::WithinAbs(sol.expected_time, 3.0 * stats.time_se));
  REQUIRE_THAT(stats.success_prob,
               Catch::Matchers::WithinAbs(0.7, 3.0 * stats.success_se));
}

TEST_CASE("estimates are deterministic and thread-count independent") {
  const SelectionParams params = derive_params(5, 1.0, 10.0);
  const DiscreteMapping m(params, optimize_finite(5, 10).mapping.alphas());

  const SimStats a = estimate(m, params, 300000, 42);
  const SimStats b = estimate(m, params, 300000, 42);
  REQUIRE(same_stats(a, b));

  const SimStats serial = estimate(m, params, 300000, 42, TimeConvention::CapAtNSlots, 1);
  const SimStats wide = estimate(m, params, 300000, 42, TimeConvention::CapAtNSlots, 7);
  REQUIRE(same_stats(serial, wide));

  const SimStats other = estimate(m, params, 300000, 43);
  REQUIRE(a.success_prob != other.success_prob);
}

TEST_CASE("winner holds the maximum metric") {
  const SelectionParams params = derive_params(5, 1.0, 10.0);
  const DiscreteMapping m(params, optimize_finite(5, 10).mapping.alphas());
  for (std::uint64_t trial = 0; trial < 2000; ++trial) {
    SplitMix64 rng = trial_stream(123, trial);
    const SelectionOutcome out = run_trial(m, params, rng);

    // replay the stream: the draws are a pure function of (seed, trial)
    SplitMix64 replay = trial_stream(123, trial);
    double best = -1.0;
    int best_index = -1;
    for (int i = 0; i < params.k; ++i) {
      const double u = replay.next_unit();
      if (u > best) {
        best = u;
        best_index = i;
      }
    }
    if (out.success) {
      REQUIRE(out.winner.has_value());
      REQUIRE(*out.winner == best_index);
    } else {
      REQUIRE_FALSE(out.winner.has_value());
    }
  }
}

TEST_CASE("outcome satisfies the success definition") {
  SplitMix64 seeder(8181);
  const std::vector<double> alphas = random_alphas(seeder, 6, 0.5);
  const SelectionParams params = derive_params(4, 1.0, 6.0);
  const DiscreteMapping m(params, alphas);
  int no_transmit_seen = 0;
  for (std::uint64_t trial = 0; trial < 5000; ++trial) {
    SplitMix64 rng = trial_stream(77, trial);
    const SelectionOutcome out = run_trial(m, params, rng);
    const bool t1_tx = out.t1 && *out.t1 <= params.t_max;
    const bool t2_tx = out.t2 && *out.t2 <= params.t_max;
    REQUIRE(out.success == (t1_tx && (!t2_tx || *out.t2 - *out.t1 >= params.delta)));
    if (!out.t1) {
      ++no_transmit_seen;
      REQUIRE(out.stop_time == params.n_slots * params.delta);
    }
  }
  REQUIRE(no_transmit_seen > 0);  // the mapping leaves real no-transmit mass
}

TEST_CASE("stop-time conventions differ by the residual past N slots") {
  // t_max = 2.5, delta = 1 -> N = 2; no-transmit trials stop at 2 or 2.5
  const SelectionParams params = derive_params(2, 1.0, 2.5);
  const std::vector<double> alphas{0.3, 0.3, 0.2};
  const DiscreteMapping m(params, alphas);

  const double e_nslots = expected_selection_time(alphas, 2, 1.0);
  REQUIRE_THAT(e_nslots, Catch::Matchers::WithinAbs(0.49 + 0.16, 1e-12));
  const double p_none = std::pow(1.0 - 0.8, 2);
  const double e_tmax = e_nslots + (params.t_max - 2.0) * p_none;

  const SimStats sn = estimate(m, params, 200000, 5, TimeConvention::CapAtNSlots);
  const SimStats st = estimate(m, params, 200000, 5, TimeConvention::CapAtTmax);
  REQUIRE_THAT(sn.mean_time, Catch::Matchers::WithinAbs(e_nslots, 4.0 * sn.time_se));
  REQUIRE_THAT(st.mean_time, Catch::Matchers::WithinAbs(e_tmax, 4.0 * st.time_se));
  REQUIRE(st.mean_time > sn.mean_time);
}

TEST_CASE("discretization is the identity on already-slotted mappings") {
  const SelectionParams params = derive_params(3, 0.25, 1.25);
  const DiscreteMapping m(params, {0.2, 0.2, 0.2, 0.1, 0.1, 0.1});
  const auto d = discretize(m, params);
  for (int i = 0; i < 4000; ++i) {
    const double u = i / 4000.0;
    REQUIRE(d.timer_for(u) == m.timer_for(u));
  }
}

TEST_CASE("discretization floors each trial's stop time by less than delta") {
  const SelectionParams params = derive_params(5, 1.0, 10.0);
  const ContinuousMapping m(3.0, MetricDistribution::exponential(1.0), 10.0);
  const auto d = discretize(m, params);
  for (std::uint64_t trial = 0; trial < 20000; ++trial) {
    SplitMix64 rng1 = trial_stream(31, trial);
    SplitMix64 rng2 = trial_stream(31, trial);
    const SelectionOutcome orig = run_trial(m, params, rng1);
    const SelectionOutcome disc = run_trial(d, params, rng2);
    REQUIRE(disc.stop_time <= orig.stop_time + 1e-15);
    REQUIRE(disc.stop_time > orig.stop_time - params.delta - 1e-15);
  }
}

TEST_CASE("slotting a continuous mapping never hurts success") {
  // paired comparison with common random numbers on 10 random mappings
  SplitMix64 seeder(616161);
  for (int rep = 0; rep < 10; ++rep) {
    const int k = 2 + static_cast<int>(seeder.next_u64() % 7);
    const double t_max = 5.0 + 10.0 * seeder.next_unit();
    const SelectionParams params = derive_params(k, 1.0, t_max);
    constexpr std::uint64_t trials = 100000;
    const std::uint64_t seed = 4000 + rep;

    double diff_sum = 0.0, diff_sq = 0.0;
    auto paired = [&](const auto& mapping) {
      const auto disc = discretize(mapping, params);
      for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 r1 = trial_stream(seed, t);
        SplitMix64 r2 = trial_stream(seed, t);
        const double diff = (run_trial(disc, params, r2).success ? 1.0 : 0.0) -
                            (run_trial(mapping, params, r1).success ? 1.0 : 0.0);
        diff_sum += diff;
        diff_sq += diff * diff;
      }
    };

    if (rep % 3 == 0) {
      paired(PowerMapping{t_max, 0.5 + 2.5 * seeder.next_unit()});
    } else if (rep % 3 == 1) {
      paired(inverse_mapping(0.5 + 5.0 * seeder.next_unit(),
                             MetricDistribution::exponential(1.0), t_max));
    } else {
      paired(inverse_mapping(0.5 + 5.0 * seeder.next_unit(),
                             MetricDistribution::rayleigh(1.0), t_max));
    }

    const double n = static_cast<double>(trials);
    const double mean = diff_sum / n;
    const double var = std::max(0.0, (diff_sq - n * mean * mean) / (n - 1.0));
    const double se = std::sqrt(var / n);
    INFO("rep=" << rep << " paired mean=" << mean << " se=" << se);
    REQUIRE(mean >= -3.0 * se - 1e-12);
  }
}

TEST_CASE("trace sink sees every trial") {
  const SelectionParams params = derive_params(3, 1.0, 4.0);
  const DiscreteMapping m(params, optimize_finite(3, 4).mapping.alphas());
  std::uint64_t count = 0;
  run_trials_trace(m, params, 500, 99, TimeConvention::CapAtNSlots,
                   [&](std::uint64_t t, const SelectionOutcome& out) {
                     REQUIRE(t == count);
                     ++count;
                     SplitMix64 rng = trial_stream(99, t);
                     const SelectionOutcome direct = run_trial(m, params, rng);
                     REQUIRE(direct.success == out.success);
                     REQUIRE(direct.stop_time == out.stop_time);
                   });
  REQUIRE(count == 500);
}
