#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace timersel {

// Neumaier-compensated accumulator. The closed-form sums run over up to
// ~1e4 terms of mixed magnitude; plain accumulation loses digits there.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_total(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

// (1 - s)^m for m >= 0, via exp(m*log1p(-s)); stable when m is large and
// s is small. s >= 1 collapses to 0 (and 0^0 == 1).
inline double pow_one_minus(double s, long m) {
  if (m == 0) return 1.0;
  if (s >= 1.0) return 0.0;
  if (s == 0.0) return 1.0;
  return std::exp(static_cast<double>(m) * std::log1p(-s));
}

}  // namespace timersel
