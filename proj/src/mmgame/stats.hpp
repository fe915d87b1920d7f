#pragma once

#include <cmath>
#include <cstdint>

namespace mmg {

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

struct Interval {
  double mean = 0;
  double low = 0;
  double high = 0;
  double halfwidth() const { return 0.5 * (high - low); }
};

// Wilson score interval for k successes out of n trials.
inline Interval wilson(uint64_t k, uint64_t n, double z = kZ95) {
  Interval r;
  if (n == 0) return Interval{0, 0, 1};
  double nn = double(n);
  double ph = double(k) / nn;
  double z2 = z * z;
  double denom = 1 + z2 / nn;
  double centre = (ph + z2 / (2 * nn)) / denom;
  double half = z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn)) / denom;
  r.mean = ph;
  r.low = std::fmax(0.0, centre - half);
  r.high = std::fmin(1.0, centre + half);
  if (r.low > ph) r.low = ph;
  if (r.high < ph) r.high = ph;
  return r;
}

// Running mean and variance (Welford).
struct Moments {
  uint64_t n = 0;
  double mean = 0;
  double m2 = 0;
  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / double(n);
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
  double stderr_mean() const { return n > 0 ? std::sqrt(variance() / double(n)) : 0.0; }
};

}  // namespace mmg
