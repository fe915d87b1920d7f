#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

#if defined(__BMI2__)
#include <immintrin.h>
#endif

#include "mmgame/error.hpp"

namespace mmg {

// Counter-based generator: every random word is a pure function of
// (seed, stream, block, counter), so results never depend on evaluation order
// or on how work is split between threads.

inline constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class Stream : uint64_t {
  Leaves = 1,
  Payoffs = 2,
  Strategies = 3,
  Automaton = 4,
  Search = 5,
  Generic = 6,
};

inline uint64_t stream_key(uint64_t seed, Stream s, uint64_t block) {
  uint64_t k = mix64(seed ^ (uint64_t(s) * 0xd1b54a32d192ed03ULL));
  return mix64(k + (block + 1) * kGolden);
}

inline uint64_t counter_word(uint64_t key, uint64_t ctr) { return mix64(key + ctr * kGolden); }

// Uniform on the open interval (0,1) with 53 random bits.
inline double to_unit_open(uint64_t w) { return (double(w >> 11) + 0.5) * 0x1.0p-53; }

// UniformRandomBitGenerator over one (key, counter) sequence, usable with the
// standard distributions for auxiliary sampling.
class CounterRng {
 public:
  using result_type = uint64_t;
  explicit CounterRng(uint64_t key, uint64_t start = 0) : key_(key), ctr_(start) {}
  CounterRng(uint64_t seed, Stream s, uint64_t block = 0) : key_(stream_key(seed, s, block)), ctr_(0) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<uint64_t>::max(); }
  result_type operator()() { return counter_word(key_, ctr_++); }
  double uniform() { return to_unit_open((*this)()); }
  bool bernoulli(double p) { return uniform() <= p; }
  uint64_t below(uint64_t n) {
    // Lemire's nearly-divisionless bounded draw.
    __uint128_t m = __uint128_t((*this)()) * n;
    uint64_t lo = uint64_t(m);
    if (lo < n) {
      uint64_t t = -n % n;
      while (lo < t) {
        m = __uint128_t((*this)()) * n;
        lo = uint64_t(m);
      }
    }
    return uint64_t(m >> 64);
  }

 private:
  uint64_t key_;
  uint64_t ctr_;
};

inline uint64_t deposit_bits(uint64_t src, uint64_t mask) {
#if defined(__BMI2__)
  return _pdep_u64(src, mask);
#else
  uint64_t out = 0;
  for (uint64_t bb = 1; mask; bb += bb) {
    if (src & bb) out |= mask & -mask;
    mask &= mask - 1;
  }
  return out;
#endif
}

// Binary expansion of a probability, most significant digit first. The lane
// value is [U < p] for U uniform, decided digit by digit.
class ProbabilityDigits {
 public:
  explicit ProbabilityDigits(double p) : p_(p) {
    require(p >= 0.0 && p <= 1.0, "probability must lie in [0,1]");
    if (p <= 0.0 || p >= 1.0) return;
    double r = p;
    while (r > 0.0) {
      r *= 2.0;
      if (r >= 1.0) {
        digits_.push_back(1);
        r -= 1.0;
      } else {
        digits_.push_back(0);
      }
    }
  }
  double p() const { return p_; }
  bool zero() const { return p_ <= 0.0; }
  bool one() const { return p_ >= 1.0; }
  const std::vector<uint8_t>& digits() const { return digits_; }

 private:
  double p_;
  std::vector<uint8_t> digits_;
};

// Fills `out[w]` with 64 independent Bernoulli(p) lanes for leaf ordinals
// first..first+count-1. The first kDense digits are drawn as full words in a
// branch-free pass; the few lanes still tied afterwards are resolved from a
// per-leaf pool with bit deposit, so a word costs about nine hashes on
// average, most of them vectorised.
class BernoulliWords {
 public:
  static constexpr int kDense = 12;
  static constexpr uint64_t kStride = 32;  // counter slots per leaf

  BernoulliWords(const ProbabilityDigits& d, uint64_t key) : d_(d), key_(key) {}

  void fill(uint64_t first, uint64_t count, uint64_t* out) const {
    if (d_.zero() || d_.one()) {
      uint64_t v = d_.one() ? ~uint64_t(0) : 0;
      for (uint64_t w = 0; w < count; ++w) out[w] = v;
      return;
    }
    const auto& dig = d_.digits();
    const int nd = int(dig.size());
    const int dense = nd < kDense ? nd : kDense;
    constexpr uint64_t kChunk = 256;
    uint64_t undecided[kChunk];
    for (uint64_t base = 0; base < count; base += kChunk) {
      uint64_t len = count - base < kChunk ? count - base : kChunk;
      uint64_t* lt = out + base;
      for (uint64_t w = 0; w < len; ++w) {
        lt[w] = 0;
        undecided[w] = ~uint64_t(0);
      }
      for (int k = 0; k < dense; ++k) {
        uint64_t c0 = (first + base) * kStride + uint64_t(k);
        if (dig[size_t(k)]) {
          for (uint64_t w = 0; w < len; ++w) {
            uint64_t r = counter_word(key_, c0 + w * kStride);
            lt[w] |= undecided[w] & ~r;
            undecided[w] &= r;
          }
        } else {
          for (uint64_t w = 0; w < len; ++w) {
            uint64_t r = counter_word(key_, c0 + w * kStride);
            undecided[w] &= ~r;
          }
        }
      }
      for (uint64_t w = 0; w < len; ++w)
        if (undecided[w]) lt[w] = finish(first + base + w, lt[w], undecided[w], dense);
    }
  }

 private:
  uint64_t finish(uint64_t leaf, uint64_t lt, uint64_t u, int k) const {
    const auto& dig = d_.digits();
    const int nd = int(dig.size());
    uint64_t slot = uint64_t(kDense);
    uint64_t pool = 0;
    int avail = 0;
    for (; u && k < nd; ++k) {
      int c = std::popcount(u);
      uint64_t bits;
      if (avail >= c) {
        bits = c == 64 ? pool : pool & ((uint64_t(1) << c) - 1);
        pool = c == 64 ? 0 : pool >> c;
        avail -= c;
      } else {
        if (slot >= kStride) fail(ErrorCode::Invariant, "Bernoulli digit pool exhausted");
        uint64_t fresh = counter_word(key_, leaf * kStride + slot++);
        int need = c - avail;
        uint64_t low = pool;
        uint64_t hi = need == 64 ? fresh : fresh & ((uint64_t(1) << need) - 1);
        bits = low | (avail == 64 ? 0 : hi << avail);
        pool = need == 64 ? 0 : fresh >> need;
        avail = 64 - need;
      }
      uint64_t r = deposit_bits(bits, u);
      if (dig[size_t(k)]) {
        lt |= u & ~r;
        u &= r;
      } else {
        u &= ~r;
      }
    }
    return lt;  // lanes still tied after the last digit have U >= p
  }

  const ProbabilityDigits& d_;
  uint64_t key_;
};

}  // namespace mmg
