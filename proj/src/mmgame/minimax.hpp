#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mmgame/error.hpp"
#include "mmgame/topology.hpp"

namespace mmg {

// Configurable ceiling on the working memory of a single evaluation.
uint64_t memory_budget();
void set_memory_budget(uint64_t bytes);
void check_budget(uint64_t bytes, const std::string& what);

struct LeafAssignment {
  GameSpec spec;
  std::vector<uint8_t> bits;  // indexed by level ordinal at depth 2n
};

struct PackedLeaves {
  GameSpec spec;
  std::vector<uint64_t> words;  // bit r of words[k] is replica r of leaf k
  int replicas = 64;
};

struct WinProbEstimate {
  double mean = 0;
  double ci_low = 0;
  double ci_high = 0;
  uint64_t replicas = 0;
  uint64_t seed = 0;
  uint64_t successes = 0;
};

struct Strategy {
  GameSpec spec;
  Player player = Player::Alice;
  // choice[d][ordinal] in {1,2} on the player's depths; empty elsewhere.
  std::vector<std::vector<uint8_t>> choice;
  int move_at(const Vertex& v) const;
};

// Alice minimises the chance that Bob wins: AND on win bits, max on payoffs.
struct BoolOps {
  template <class T>
  static T alice(T x, T y) { return x & y; }
  template <class T>
  static T bob(T x, T y) { return x | y; }
};
struct PayoffOps {
  static double alice(double x, double y) { return x > y ? x : y; }
  static double bob(double x, double y) { return x < y ? x : y; }
};

namespace detail {

inline void b_children(SideKind kind, uint64_t b, uint64_t& c1, uint64_t& c2) {
  if (kind == SideKind::Tree) {
    c1 = 2 * b;
    c2 = 2 * b + 1;
  } else {
    c1 = b + 1;
    c2 = b;
  }
}

template <class T, class Ops, class Gen>
class TreeSideEvaluator {
 public:
  TreeSideEvaluator(const GameSpec& spec, Gen& gen) : spec_(spec), gen_(gen), D_(spec.depth()) {
    uint64_t bytes = 0;
    scratch_.resize(size_t(D_) + 1);
    for (int d = 0; d <= D_; ++d) {
      uint64_t bc = level_shape(spec, d).b_count;
      bytes += 2 * bc * sizeof(T);
      check_budget(bytes, "row scratch for " + spec_name(spec) + " n=" + std::to_string(spec.rounds));
      scratch_[size_t(d)].resize(size_t(2 * bc));
    }
    bkind_ = b_kind(spec.family);
  }

  T root() {
    T out[1];
    rec(0, 0, out);
    return out[0];
  }

 private:
  void rec(uint64_t w, int d, T* out) {
    if (d == D_) {
      gen_(w, out);
      return;
    }
    uint64_t bc = level_shape(spec_, d).b_count;
    uint64_t bc_next = level_shape(spec_, d + 1).b_count;
    T* c1 = scratch_[size_t(d + 1)].data();
    if (a_moves_at(spec_, d)) {
      T* c2 = c1 + bc_next;
      rec(2 * w, d + 1, c1);
      rec(2 * w + 1, d + 1, c2);
      for (uint64_t b = 0; b < bc; ++b) out[b] = Ops::alice(c1[b], c2[b]);
    } else {
      rec(w, d + 1, c1);
      if (bkind_ == SideKind::Tree) {
        for (uint64_t b = 0; b < bc; ++b) out[b] = Ops::bob(c1[2 * b], c1[2 * b + 1]);
      } else {
        for (uint64_t b = 0; b < bc; ++b) out[b] = Ops::bob(c1[b + 1], c1[b]);
      }
    }
  }

  const GameSpec& spec_;
  Gen& gen_;
  int D_;
  SideKind bkind_;
  std::vector<std::vector<T>> scratch_;
};

// Reduces level d+1 (`in`) to level d (`out`).
template <class T, class Ops>
void reduce_level(const GameSpec& spec, int d, const T* in, T* out) {
  LevelShape s = level_shape(spec, d);
  LevelShape t = level_shape(spec, d + 1);
  if (a_moves_at(spec, d)) {
    SideKind ak = a_kind(spec.family);
    for (uint64_t a = 0; a < s.a_count; ++a) {
      uint64_t c1 = child_code(ak, a, 1), c2 = child_code(ak, a, 2);
      const T* r1 = in + c1 * t.b_count;
      const T* r2 = in + c2 * t.b_count;
      T* o = out + a * s.b_count;
      for (uint64_t b = 0; b < s.b_count; ++b) o[b] = Ops::alice(r1[b], r2[b]);
    }
  } else {
    SideKind bk = b_kind(spec.family);
    for (uint64_t a = 0; a < s.a_count; ++a) {
      const T* r = in + a * t.b_count;
      T* o = out + a * s.b_count;
      if (bk == SideKind::Tree) {
        for (uint64_t b = 0; b < s.b_count; ++b) o[b] = Ops::bob(r[2 * b], r[2 * b + 1]);
      } else {
        for (uint64_t b = 0; b < s.b_count; ++b) o[b] = Ops::bob(r[b + 1], r[b]);
      }
    }
  }
}

// Two-level sweep for specs whose a-side is a lattice. The top level is never
// stored: its rows are generated on demand while level 2n-1 is filled.
template <class T, class Ops, class Gen>
T level_sweep(const GameSpec& spec, Gen& gen) {
  const int D = spec.depth();
  LevelShape top = level_shape(spec, D);
  if (D == 0) {
    T v[1];
    gen(0, v);
    return v[0];
  }
  LevelShape s1 = level_shape(spec, D - 1);
  uint64_t peak = s1.size() + (D >= 2 ? level_shape(spec, D - 2).size() : 0) + 2 * top.b_count;
  check_budget(peak * sizeof(T), "level sweep for " + spec_name(spec) + " n=" + std::to_string(spec.rounds));
  std::vector<T> cur(size_t(s1.size()));
  std::vector<T> rowA(size_t(top.b_count)), rowB(size_t(top.b_count));
  if (a_moves_at(spec, D - 1)) {
    // lattice a-side: output row a needs top rows a+1 and a
    gen(0, rowA.data());
    for (uint64_t a = 0; a < s1.a_count; ++a) {
      gen(a + 1, rowB.data());
      T* o = cur.data() + a * s1.b_count;
      for (uint64_t b = 0; b < s1.b_count; ++b) o[b] = Ops::alice(rowB[b], rowA[b]);
      std::swap(rowA, rowB);
    }
  } else {
    SideKind bk = b_kind(spec.family);
    for (uint64_t a = 0; a < s1.a_count; ++a) {
      gen(a, rowA.data());
      T* o = cur.data() + a * s1.b_count;
      for (uint64_t b = 0; b < s1.b_count; ++b) {
        uint64_t c1, c2;
        b_children(bk, b, c1, c2);
        o[b] = Ops::bob(rowA[c1], rowA[c2]);
      }
    }
  }
  std::vector<T> nxt;
  for (int d = D - 2; d >= 0; --d) {
    nxt.resize(size_t(level_shape(spec, d).size()));
    reduce_level<T, Ops>(spec, d, cur.data(), nxt.data());
    std::swap(cur, nxt);
  }
  return cur[0];
}

}  // namespace detail

// Root value of the min-max recursion. `gen(a_code, out)` must write the
// outcome values of top-level row `a_code`, i.e. ordinals
// a_code*b_count .. a_code*b_count + b_count - 1.
template <class T, class Ops, class Gen>
T evaluate_root(const GameSpec& spec, Gen&& gen) {
  validate_spec(spec);
  if (a_kind(spec.family) == SideKind::Tree && spec.depth() > 0) {
    detail::TreeSideEvaluator<T, Ops, std::remove_reference_t<Gen>> ev(spec, gen);
    return ev.root();
  }
  return detail::level_sweep<T, Ops>(spec, gen);
}

// Every level's values, depth 0..2n (small specs only).
template <class T, class Ops>
std::vector<std::vector<T>> evaluate_levels(const GameSpec& spec, const std::vector<T>& leaves) {
  validate_spec(spec);
  const int D = spec.depth();
  uint64_t total = 0;
  for (int d = 0; d <= D; ++d) total += level_shape(spec, d).size();
  check_budget(total * sizeof(T), "all-level evaluation of " + spec_name(spec) + " n=" + std::to_string(spec.rounds));
  require(leaves.size() == outcome_count(spec), "leaf vector length must equal the outcome count");
  std::vector<std::vector<T>> lv(size_t(D) + 1);
  lv[size_t(D)] = leaves;
  for (int d = D - 1; d >= 0; --d) {
    lv[size_t(d)].resize(size_t(level_shape(spec, d).size()));
    detail::reduce_level<T, Ops>(spec, d, lv[size_t(d) + 1].data(), lv[size_t(d)].data());
  }
  return lv;
}

LeafAssignment make_leaves(const GameSpec& spec, std::vector<uint8_t> bits);
LeafAssignment constant_leaves(const GameSpec& spec, bool value);

int eval_L(const GameSpec& spec, const LeafAssignment& x);
uint64_t eval_L_packed(const GameSpec& spec, const PackedLeaves& packed);
PackedLeaves pack(const GameSpec& spec, const std::vector<LeafAssignment>& replicas);
LeafAssignment unpack(const PackedLeaves& packed, int replica);

// Replica block `block` (replicas 64*block .. 64*block+63) of the leaf field
// used by mc_win_prob.
PackedLeaves sample_packed_leaves(const GameSpec& spec, double p, uint64_t seed, uint64_t block);
// Scalar Bernoulli(p) field keyed by outcome ordinal, shared with the
// automaton initial condition so both sides see the same randomness.
LeafAssignment sample_leaves(const GameSpec& spec, double p, uint64_t seed);
double leaf_uniform(uint64_t seed, uint64_t ordinal);

WinProbEstimate mc_win_prob(const GameSpec& spec, double p, uint64_t replicas, uint64_t seed, double z = 1.959963984540054);

// Count c[k] of assignments with k ones and L = 1 (outcome_count <= 25).
std::vector<uint64_t> win_weight_counts(const GameSpec& spec);
double brute_force_win_prob(const GameSpec& spec, double p);
double polynomial_from_counts(const std::vector<uint64_t>& counts, double p);
// Exact rational result rendered as "num/den" (outcome_count <= 16).
std::string brute_force_win_prob_exact(const GameSpec& spec, double p);

double ab_tree_recursion(int n, double p);
// Pushes the exact law of each level's value vector towards the root.
double level_law_win_prob(const GameSpec& spec, double p);

Strategy extract_strategy(const GameSpec& spec, const LeafAssignment& x, Player player);
Strategy constant_strategy(const GameSpec& spec, Player player, int move);
// Independent uniform move at every vertex where `player` moves.
Strategy random_strategy(const GameSpec& spec, Player player, uint64_t seed);
void check_strategy(const Strategy& s);
// Sorted outcome ordinals reachable while `s` is followed.
std::vector<uint64_t> strategy_outcome_set(const GameSpec& spec, const Strategy& s);
bool is_winning(const GameSpec& spec, const Strategy& s, const LeafAssignment& x);

std::vector<double> sample_optimal_payoff(const GameSpec& spec, uint64_t replicas, uint64_t seed);
double payoff_root(const GameSpec& spec, const std::vector<double>& leaf_values);

}  // namespace mmg
