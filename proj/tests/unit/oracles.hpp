#pragma once

// Reference implementations built directly from the game rules, sharing no
// code with the library beyond the plain GameSpec description.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mmgame/topology.hpp"

namespace oracle {

// A side's move history as a string of '1'/'2'.
inline bool is_tree(mmg::Family f, bool alice_side) {
  switch (f) {
    case mmg::Family::AB: return true;
    case mmg::Family::Ab: return alice_side;
    case mmg::Family::aB: return !alice_side;
    case mmg::Family::ab: return false;
  }
  return false;
}

inline uint64_t side_code(const std::string& moves, bool tree) {
  uint64_t c = 0;
  if (tree) {
    for (char m : moves) c = 2 * c + (m == '2' ? 1 : 0);
  } else {
    for (char m : moves) c += (m == '1' ? 1 : 0);
  }
  return c;
}

inline uint64_t side_size(int len, bool tree) { return tree ? (uint64_t(1) << len) : uint64_t(len) + 1; }

inline uint64_t outcome_ordinal(const mmg::GameSpec& s, const std::string& a, const std::string& b) {
  bool ta = is_tree(s.family, true), tb = is_tree(s.family, false);
  return side_code(a, ta) * side_size(s.rounds, tb) + side_code(b, tb);
}

inline uint64_t outcomes(const mmg::GameSpec& s) {
  return side_size(s.rounds, is_tree(s.family, true)) * side_size(s.rounds, is_tree(s.family, false));
}

// Plays out every history; Bob wins at an outcome whose bit is 1, Alice
// needs both continuations winning for herself, Bob needs one.
inline int eval(const mmg::GameSpec& s, const std::vector<uint8_t>& bits) {
  std::function<int(int, std::string, std::string)> rec = [&](int d, std::string a, std::string b) -> int {
    if (d == 2 * s.rounds) return bits[outcome_ordinal(s, a, b)];
    bool alice = (d % 2 == 0) == s.alice_first();
    int v1 = alice ? rec(d + 1, a + "1", b) : rec(d + 1, a, b + "1");
    int v2 = alice ? rec(d + 1, a + "2", b) : rec(d + 1, a, b + "2");
    return alice ? (v1 & v2) : (v1 | v2);
  };
  return rec(0, "", "");
}

inline double eval_payoff(const mmg::GameSpec& s, const std::vector<double>& u) {
  std::function<double(int, std::string, std::string)> rec = [&](int d, std::string a, std::string b) -> double {
    if (d == 2 * s.rounds) return u[outcome_ordinal(s, a, b)];
    bool alice = (d % 2 == 0) == s.alice_first();
    double v1 = alice ? rec(d + 1, a + "1", b) : rec(d + 1, a, b + "1");
    double v2 = alice ? rec(d + 1, a + "2", b) : rec(d + 1, a, b + "2");
    return alice ? std::max(v1, v2) : std::min(v1, v2);
  };
  return rec(0, "", "");
}

// Exact P[L = 1] by summing over all assignments (small games only).
inline double win_prob(const mmg::GameSpec& s, double p) {
  const uint64_t N = outcomes(s);
  double total = 0;
  std::vector<uint8_t> bits(N);
  for (uint64_t x = 0; x < (uint64_t(1) << N); ++x) {
    int ones = 0;
    for (uint64_t k = 0; k < N; ++k) {
      bits[k] = (x >> k) & 1;
      ones += bits[k];
    }
    if (eval(s, bits)) total += std::pow(p, ones) * std::pow(1 - p, double(N) - ones);
  }
  return total;
}

// Exact counts c[k] of winning assignments with k ones.
inline std::vector<uint64_t> win_counts(const mmg::GameSpec& s) {
  const uint64_t N = outcomes(s);
  std::vector<uint64_t> c(N + 1, 0);
  std::vector<uint8_t> bits(N);
  for (uint64_t x = 0; x < (uint64_t(1) << N); ++x) {
    int ones = 0;
    for (uint64_t k = 0; k < N; ++k) {
      bits[k] = (x >> k) & 1;
      ones += bits[k];
    }
    c[size_t(ones)] += uint64_t(eval(s, bits));
  }
  return c;
}

// AB with Alice first: two Bob ORs feed each Alice AND.
inline double tree_recursion(int n, double p) {
  double q = p;
  for (int k = 0; k < n; ++k) {
    double bob = 1 - (1 - q) * (1 - q);
    q = bob * bob;
  }
  return q;
}

}  // namespace oracle
