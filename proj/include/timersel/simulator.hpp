#pragma once

#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "timersel/model.hpp"
#include "timersel/numeric.hpp"
#include "timersel/rng.hpp"

// Seeded Monte Carlo engine for the contention process: k i.i.d. uniform
// metrics, any monotone metric-to-timer mapping, success iff the best
// node's timer fires by t_max and the runner-up fires at least delta later
// (or not at all).
//
// Determinism contract: trial i draws from a stream derived only from
// (seed, i), and per-chunk partial sums are combined in fixed chunk order,
// so estimate() returns bit-identical results for any thread count.

namespace timersel {

// Stop-time cap for trials where nobody transmits (and for T_(1) beyond the
// cap). CapAtNSlots (N*delta) matches the closed-form expected selection
// time; CapAtTmax matches the looser reading of the protocol deadline.
enum class TimeConvention { CapAtNSlots, CapAtTmax };

struct SelectionOutcome {
  bool success = false;
  double stop_time = 0.0;
  std::optional<int> winner;  // index of the max-metric node, when selected
  TimerValue t1;              // best node's timer
  TimerValue t2;              // second-best node's timer
};

inline double stop_time_cap(const SelectionParams& params, TimeConvention convention) {
  return convention == TimeConvention::CapAtNSlots ? params.n_slots * params.delta
                                                   : params.t_max;
}

template <TimerMapping M>
SelectionOutcome run_trial(const M& mapping, const SelectionParams& params,
                           SplitMix64& rng,
                           TimeConvention convention = TimeConvention::CapAtNSlots) {
  double best = -1.0, second = -1.0;
  int best_index = -1;
  for (int i = 0; i < params.k; ++i) {
    const double u = rng.next_unit();
    if (u > best) {
      second = best;
      best = u;
      best_index = i;
    } else if (u > second) {
      second = u;  // exact metric ties leave t2 - t1 == 0 < delta: a collision
    }
  }

  SelectionOutcome out;
  out.t1 = mapping.timer_for(best);
  out.t2 = params.k >= 2 ? mapping.timer_for(second) : TimerValue{};
  assert(!timer_less(out.t2, out.t1));  // mapping must be monotone

  const bool best_transmits = out.t1 && *out.t1 <= params.t_max;
  const bool second_transmits = out.t2 && *out.t2 <= params.t_max;
  out.success =
      best_transmits && (!second_transmits || *out.t2 - *out.t1 >= params.delta);
  if (out.success) out.winner = best_index;

  const double cap = stop_time_cap(params, convention);
  out.stop_time = best_transmits ? std::min(*out.t1, cap) : cap;
  return out;
}

struct SimStats {
  std::uint64_t trials = 0;
  double success_prob = 0.0;
  double success_se = 0.0;
  double mean_time = 0.0;
  double time_se = 0.0;
  std::uint64_t seed = 0;
  TimeConvention convention = TimeConvention::CapAtNSlots;
};

namespace detail {

struct ChunkPartial {
  std::uint64_t successes = 0;
  double time_sum = 0.0;
  double time_sq_sum = 0.0;
};

template <TimerMapping M>
ChunkPartial run_chunk(const M& mapping, const SelectionParams& params,
                       std::uint64_t seed, std::uint64_t first, std::uint64_t last,
                       TimeConvention convention) {
  ChunkPartial part;
  CompensatedSum time_sum, time_sq_sum;
  for (std::uint64_t t = first; t < last; ++t) {
    SplitMix64 rng = trial_stream(seed, t);
    const SelectionOutcome out = run_trial(mapping, params, rng, convention);
    part.successes += out.success ? 1 : 0;
    time_sum.add(out.stop_time);
    time_sq_sum.add(out.stop_time * out.stop_time);
  }
  part.time_sum = time_sum.value();
  part.time_sq_sum = time_sq_sum.value();
  return part;
}

}  // namespace detail

template <TimerMapping M>
SimStats estimate(const M& mapping, const SelectionParams& params, std::uint64_t trials,
                  std::uint64_t seed,
                  TimeConvention convention = TimeConvention::CapAtNSlots,
                  unsigned threads = 0) {
  if (trials < 1) throw std::invalid_argument("estimate: need at least one trial");

  constexpr std::uint64_t kChunk = 1u << 16;  // fixed: chunking must not depend on threads
  const std::uint64_t n_chunks = (trials + kChunk - 1) / kChunk;
  std::vector<detail::ChunkPartial> partials(n_chunks);

  unsigned n_threads = threads != 0 ? threads : std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  n_threads = static_cast<unsigned>(
      std::min<std::uint64_t>(n_threads, n_chunks));

  auto worker = [&](std::atomic<std::uint64_t>& next) {
    for (std::uint64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) {
      const std::uint64_t first = c * kChunk;
      const std::uint64_t last = std::min(trials, first + kChunk);
      partials[c] = detail::run_chunk(mapping, params, seed, first, last, convention);
    }
  };

  if (n_threads <= 1) {
    std::atomic<std::uint64_t> next{0};
    worker(next);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back([&] { worker(next); });
    for (auto& th : pool) th.join();
  }

  std::uint64_t successes = 0;
  CompensatedSum time_sum, time_sq_sum;
  for (const auto& part : partials) {
    successes += part.successes;
    time_sum.add(part.time_sum);
    time_sq_sum.add(part.time_sq_sum);
  }

  const double n = static_cast<double>(trials);
  SimStats stats;
  stats.trials = trials;
  stats.seed = seed;
  stats.convention = convention;
  stats.success_prob = static_cast<double>(successes) / n;
  stats.mean_time = time_sum.value() / n;
  if (trials >= 2) {
    const double bessel = n / (n - 1.0);
    stats.success_se =
        std::sqrt(std::max(0.0, stats.success_prob * (1.0 - stats.success_prob) * bessel) / n);
    const double var =
        std::max(0.0, (time_sq_sum.value() - n * stats.mean_time * stats.mean_time) / (n - 1.0));
    stats.time_se = std::sqrt(var / n);
  }
  return stats;
}

// Serial trial-by-trial run feeding a sink; used for per-trial traces.
template <TimerMapping M, typename Sink>
void run_trials_trace(const M& mapping, const SelectionParams& params,
                      std::uint64_t trials, std::uint64_t seed, TimeConvention convention,
                      Sink&& sink) {
  for (std::uint64_t t = 0; t < trials; ++t) {
    SplitMix64 rng = trial_stream(seed, t);
    sink(t, run_trial(mapping, params, rng, convention));
  }
}

// Slots a continuous mapping onto the timer grid: timers in
// [l*delta, (l+1)*delta) floor to l*delta, the leftover [N*delta, t_max]
// collapses to N*delta, and anything past t_max stays NoTransmit.
template <TimerMapping M>
class DiscretizedMapping {
 public:
  DiscretizedMapping(M inner, SelectionParams params)
      : inner_(std::move(inner)), params_(params) {}

  TimerValue timer_for(double u) const {
    const TimerValue t = inner_.timer_for(u);
    if (!t || *t > params_.t_max) return std::nullopt;
    const double slot_end = params_.n_slots * params_.delta;
    if (*t >= slot_end) return slot_end;
    auto slot = static_cast<long>(std::floor(*t / params_.delta));
    // repair the floating floor so slot*delta <= t < (slot+1)*delta exactly
    if ((slot + 1) * params_.delta <= *t) ++slot;
    if (slot * params_.delta > *t) --slot;
    return static_cast<double>(slot) * params_.delta;
  }

  const M& inner() const { return inner_; }

 private:
  M inner_;
  SelectionParams params_;
};

template <TimerMapping M>
DiscretizedMapping<M> discretize(M mapping, const SelectionParams& params) {
  return DiscretizedMapping<M>(std::move(mapping), params);
}

}  // namespace timersel
