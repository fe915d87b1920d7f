#include "mmgame/minimax.hpp"

#include <atomic>
#include <bit>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "mmgame/rng.hpp"
#include "mmgame/stats.hpp"

namespace mmg {

namespace {
std::atomic<uint64_t> g_budget{uint64_t(3) << 30};
}

uint64_t memory_budget() { return g_budget.load(); }
void set_memory_budget(uint64_t bytes) { g_budget.store(bytes); }

void check_budget(uint64_t bytes, const std::string& what) {
  uint64_t cap = memory_budget();
  if (bytes > cap)
    fail(ErrorCode::Budget, "memory budget exceeded: " + what + " needs " + std::to_string(bytes) +
                                " bytes, budget is " + std::to_string(cap) + " bytes");
}

int Strategy::move_at(const Vertex& v) const {
  int d = int(v.depth());
  require(d < int(choice.size()) && !choice[size_t(d)].empty(), "strategy is not defined at this vertex");
  return choice[size_t(d)][size_t(level_index(spec, v))];
}

LeafAssignment make_leaves(const GameSpec& spec, std::vector<uint8_t> bits) {
  validate_spec(spec);
  require(bits.size() == outcome_count(spec), "leaf assignment length must equal the outcome count");
  for (auto& b : bits) require(b <= 1, "leaf values must be 0 or 1");
  return LeafAssignment{spec, std::move(bits)};
}

LeafAssignment constant_leaves(const GameSpec& spec, bool value) {
  validate_spec(spec);
  return LeafAssignment{spec, std::vector<uint8_t>(size_t(outcome_count(spec)), uint8_t(value))};
}

int eval_L(const GameSpec& spec, const LeafAssignment& x) {
  require(x.bits.size() == outcome_count(spec), "leaf assignment does not match the spec");
  const uint64_t bc = level_shape(spec, spec.depth()).b_count;
  const uint8_t* src = x.bits.data();
  return evaluate_root<uint8_t, BoolOps>(spec, [&](uint64_t a, uint8_t* out) {
    std::copy(src + a * bc, src + (a + 1) * bc, out);
  });
}

uint64_t eval_L_packed(const GameSpec& spec, const PackedLeaves& packed) {
  require(packed.words.size() == outcome_count(spec), "packed leaves do not match the spec");
  require(packed.replicas >= 1 && packed.replicas <= 64, "replica count must be in [1,64]");
  const uint64_t bc = level_shape(spec, spec.depth()).b_count;
  const uint64_t* src = packed.words.data();
  uint64_t r = evaluate_root<uint64_t, BoolOps>(spec, [&](uint64_t a, uint64_t* out) {
    std::copy(src + a * bc, src + (a + 1) * bc, out);
  });
  return packed.replicas == 64 ? r : r & ((uint64_t(1) << packed.replicas) - 1);
}

PackedLeaves pack(const GameSpec& spec, const std::vector<LeafAssignment>& replicas) {
  require(!replicas.empty() && replicas.size() <= 64, "between 1 and 64 replicas can be packed");
  PackedLeaves p{spec, std::vector<uint64_t>(size_t(outcome_count(spec)), 0), int(replicas.size())};
  for (size_t r = 0; r < replicas.size(); ++r) {
    require(replicas[r].bits.size() == p.words.size(), "replica length mismatch");
    for (size_t k = 0; k < p.words.size(); ++k)
      if (replicas[r].bits[k]) p.words[k] |= uint64_t(1) << r;
  }
  return p;
}

LeafAssignment unpack(const PackedLeaves& packed, int replica) {
  require(replica >= 0 && replica < packed.replicas, "replica index out of range");
  LeafAssignment x{packed.spec, std::vector<uint8_t>(packed.words.size())};
  for (size_t k = 0; k < packed.words.size(); ++k) x.bits[k] = uint8_t((packed.words[k] >> replica) & 1);
  return x;
}

PackedLeaves sample_packed_leaves(const GameSpec& spec, double p, uint64_t seed, uint64_t block) {
  validate_spec(spec);
  uint64_t n = outcome_count(spec);
  check_budget(n * 8, "packed leaf field");
  ProbabilityDigits dig(p);
  BernoulliWords bw(dig, stream_key(seed, Stream::Leaves, block));
  PackedLeaves out{spec, std::vector<uint64_t>(size_t(n)), 64};
  bw.fill(0, n, out.words.data());
  return out;
}

double leaf_uniform(uint64_t seed, uint64_t ordinal) {
  return to_unit_open(counter_word(stream_key(seed, Stream::Automaton, 0), ordinal));
}

LeafAssignment sample_leaves(const GameSpec& spec, double p, uint64_t seed) {
  validate_spec(spec);
  require(p >= 0 && p <= 1, "probability must lie in [0,1]");
  uint64_t n = outcome_count(spec);
  check_budget(n, "scalar leaf field");
  LeafAssignment x{spec, std::vector<uint8_t>(size_t(n))};
  for (uint64_t k = 0; k < n; ++k) x.bits[k] = leaf_uniform(seed, k) <= p;
  return x;
}

WinProbEstimate mc_win_prob(const GameSpec& spec, double p, uint64_t replicas, uint64_t seed, double z) {
  validate_spec(spec);
  require(replicas >= 1, "replicas must be at least 1");
  require(p >= 0 && p <= 1, "probability must lie in [0,1]");
  WinProbEstimate est;
  est.replicas = replicas;
  est.seed = seed;
  if (p <= 0 || p >= 1) {
    // L(0)=0 and L(1)=1, so the estimate is exact.
    est.successes = p >= 1 ? replicas : 0;
    est.mean = est.ci_low = est.ci_high = p >= 1 ? 1.0 : 0.0;
    return est;
  }
  const ProbabilityDigits dig(p);
  const uint64_t blocks = (replicas + 63) / 64;
  const uint64_t bc = level_shape(spec, spec.depth()).b_count;
  const uint64_t rows = level_shape(spec, spec.depth()).a_count;
  constexpr uint64_t kRowBatch = 64;
  uint64_t k = 0;
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : k)
  for (uint64_t b = 0; b < blocks; ++b) {
    try {
      BernoulliWords bw(dig, stream_key(seed, Stream::Leaves, b));
      // Rows are requested in increasing order, so generate them in batches.
      std::vector<uint64_t> buf(static_cast<size_t>(kRowBatch * bc));
      uint64_t start = ~uint64_t(0);
      uint64_t w = evaluate_root<uint64_t, BoolOps>(spec, [&](uint64_t a, uint64_t* out) {
        if (a < start || a >= start + kRowBatch) {
          start = a;
          bw.fill(a * bc, std::min(kRowBatch, rows - a) * bc, buf.data());
        }
        std::copy_n(buf.data() + (a - start) * bc, bc, out);
      });
      uint64_t lanes = std::min<uint64_t>(64, replicas - 64 * b);
      if (lanes < 64) w &= (uint64_t(1) << lanes) - 1;
      k += uint64_t(std::popcount(w));
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  Interval iv = wilson(k, replicas, z);
  est.successes = k;
  est.mean = iv.mean;
  est.ci_low = iv.low;
  est.ci_high = iv.high;
  return est;
}

std::vector<uint64_t> win_weight_counts(const GameSpec& spec) {
  validate_spec(spec);
  const uint64_t N = outcome_count(spec);
  if (N > 25)
    fail(ErrorCode::Budget, "exhaustive enumeration capped at 25 outcomes, " + spec_name(spec) + " n=" +
                                std::to_string(spec.rounds) + " has " + std::to_string(N));
  std::vector<uint64_t> counts(size_t(N) + 1, 0);
  static const uint64_t kLow[6] = {0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
                                   0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
  const uint64_t total = uint64_t(1) << N;
  const uint64_t bc = level_shape(spec, spec.depth()).b_count;
  std::vector<uint64_t> words(static_cast<size_t>(N));
  const uint64_t step = N >= 6 ? 64 : total;
  for (uint64_t base = 0; base < total; base += step) {
    for (uint64_t k = 0; k < N; ++k) words[k] = k < 6 ? kLow[k] : (((base >> k) & 1) ? ~uint64_t(0) : 0);
    uint64_t res = evaluate_root<uint64_t, BoolOps>(spec, [&](uint64_t a, uint64_t* out) {
      std::copy(words.begin() + long(a * bc), words.begin() + long((a + 1) * bc), out);
    });
    if (step < 64) res &= (uint64_t(1) << step) - 1;
    int wb = std::popcount(base);
    while (res) {
      int r = std::countr_zero(res);
      res &= res - 1;
      counts[size_t(wb + std::popcount(uint64_t(r)))]++;
    }
  }
  return counts;
}

double polynomial_from_counts(const std::vector<uint64_t>& counts, double p) {
  const int N = int(counts.size()) - 1;
  double s = 0;
  for (int k = 0; k <= N; ++k)
    if (counts[size_t(k)]) s += double(counts[size_t(k)]) * std::pow(p, k) * std::pow(1 - p, N - k);
  return s;
}

double brute_force_win_prob(const GameSpec& spec, double p) {
  require(p >= 0 && p <= 1, "probability must lie in [0,1]");
  return polynomial_from_counts(win_weight_counts(spec), p);
}

std::string brute_force_win_prob_exact(const GameSpec& spec, double p) {
  require(p >= 0 && p <= 1, "probability must lie in [0,1]");
  validate_spec(spec);
  if (outcome_count(spec) > 16)
    fail(ErrorCode::Budget, "exact rational enumeration capped at 16 outcomes");
  using boost::multiprecision::cpp_rational;
  auto counts = win_weight_counts(spec);
  cpp_rational q(p), one(1), s(0);
  const int N = int(counts.size()) - 1;
  for (int k = 0; k <= N; ++k) {
    if (!counts[size_t(k)]) continue;
    cpp_rational t(counts[size_t(k)]);
    for (int i = 0; i < k; ++i) t *= q;
    for (int i = k; i < N; ++i) t *= (one - q);
    s += t;
  }
  return s.str();
}

double ab_tree_recursion(int n, double p) {
  require(n >= 0, "rounds must be nonnegative");
  require(p >= 0 && p <= 1, "probability must lie in [0,1]");
  double q = p;
  for (int i = 0; i < n; ++i) {
    q = 1 - (1 - q) * (1 - q);
    q = q * q;
  }
  return q;
}

double level_law_win_prob(const GameSpec& spec, double p) {
  validate_spec(spec);
  require(p >= 0 && p <= 1, "probability must lie in [0,1]");
  const int D = spec.depth();
  const uint64_t N = outcome_count(spec);
  if (N > 24) fail(ErrorCode::Budget, "level-law propagation capped at 24 outcomes");
  std::vector<double> law(size_t(1) << N);
  for (uint64_t x = 0; x < law.size(); ++x) {
    int k = std::popcount(x);
    law[x] = std::pow(p, k) * std::pow(1 - p, int(N) - k);
  }
  std::vector<uint8_t> in, out;
  for (int d = D - 1; d >= 0; --d) {
    uint64_t up = level_shape(spec, d + 1).size();
    uint64_t dn = level_shape(spec, d).size();
    std::vector<double> next(size_t(1) << dn, 0.0);
    in.resize(size_t(up));
    out.resize(size_t(dn));
    for (uint64_t x = 0; x < law.size(); ++x) {
      if (law[x] == 0) continue;
      for (uint64_t i = 0; i < up; ++i) in[i] = uint8_t((x >> i) & 1);
      detail::reduce_level<uint8_t, BoolOps>(spec, d, in.data(), out.data());
      uint64_t y = 0;
      for (uint64_t i = 0; i < dn; ++i) y |= uint64_t(out[i]) << i;
      next[y] += law[x];
    }
    law.swap(next);
  }
  return law.size() > 1 ? law[1] : 0.0;
}

Strategy constant_strategy(const GameSpec& spec, Player player, int move) {
  validate_spec(spec);
  require(move == 1 || move == 2, "move must be 1 or 2");
  Strategy s{spec, player, std::vector<std::vector<uint8_t>>(size_t(spec.depth()))};
  uint64_t total = 0;
  for (int d = 0; d < spec.depth(); ++d)
    if (turn(spec, d) == player) {
      total += level_shape(spec, d).size();
      check_budget(total, "strategy table");
      s.choice[size_t(d)].assign(size_t(level_shape(spec, d).size()), uint8_t(move));
    }
  return s;
}

Strategy random_strategy(const GameSpec& spec, Player player, uint64_t seed) {
  Strategy s = constant_strategy(spec, player, 1);
  CounterRng rng(seed, Stream::Strategies, 0);
  for (auto& level : s.choice) {
    for (size_t i = 0; i < level.size(); i += 64) {
      uint64_t w = rng();
      for (size_t k = i; k < std::min(level.size(), i + 64); ++k) level[k] = uint8_t(1 + ((w >> (k - i)) & 1));
    }
  }
  return s;
}

void check_strategy(const Strategy& s) {
  validate_spec(s.spec);
  require(int(s.choice.size()) == s.spec.depth(), "strategy depth mismatch");
  for (int d = 0; d < s.spec.depth(); ++d) {
    bool mine = turn(s.spec, d) == s.player;
    const auto& c = s.choice[size_t(d)];
    if (!mine) {
      require(c.empty(), "strategy defines moves at opponent depths");
      continue;
    }
    require(c.size() == level_shape(s.spec, d).size(), "strategy level size mismatch");
    for (uint8_t m : c) require(m == 1 || m == 2, "strategy moves must be 1 or 2");
  }
}

Strategy extract_strategy(const GameSpec& spec, const LeafAssignment& x, Player player) {
  auto lv = evaluate_levels<uint8_t, BoolOps>(spec, x.bits);
  const uint8_t good = player == Player::Alice ? 0 : 1;
  if (lv[0][0] != good)
    fail(ErrorCode::NoStrategy, std::string(player == Player::Alice ? "Alice" : "Bob") +
                                    " has no winning strategy under this assignment");
  Strategy s{spec, player, std::vector<std::vector<uint8_t>>(size_t(spec.depth()))};
  for (int d = 0; d < spec.depth(); ++d) {
    if (turn(spec, d) != player) continue;
    LevelShape sh = level_shape(spec, d);
    LevelShape up = level_shape(spec, d + 1);
    auto& c = s.choice[size_t(d)];
    c.resize(size_t(sh.size()));
    for (uint64_t i = 0; i < sh.size(); ++i) {
      Vertex v = vertex_at(spec, d, i);
      auto ch = children(spec, v);
      uint8_t v1 = lv[size_t(d) + 1][size_t(ch[0].a.code * up.b_count + ch[0].b.code)];
      c[i] = (v1 == good || lv[size_t(d)][i] != good) ? 1 : 2;
    }
  }
  return s;
}

std::vector<uint64_t> strategy_outcome_set(const GameSpec& spec, const Strategy& s) {
  require(s.spec == spec, "strategy belongs to a different spec");
  check_strategy(s);
  std::vector<uint8_t> cur(1, 1), nxt;
  for (int d = 0; d < spec.depth(); ++d) {
    LevelShape up = level_shape(spec, d + 1);
    nxt.assign(size_t(up.size()), 0);
    bool mine = turn(spec, d) == s.player;
    for (uint64_t i = 0; i < cur.size(); ++i) {
      if (!cur[i]) continue;
      auto ch = children(spec, vertex_at(spec, d, i));
      for (int k = 0; k < 2; ++k) {
        if (mine && s.choice[size_t(d)][i] != k + 1) continue;
        nxt[size_t(ch[size_t(k)].a.code * up.b_count + ch[size_t(k)].b.code)] = 1;
      }
    }
    cur.swap(nxt);
  }
  std::vector<uint64_t> out;
  for (uint64_t i = 0; i < cur.size(); ++i)
    if (cur[i]) out.push_back(i);
  return out;
}

bool is_winning(const GameSpec& spec, const Strategy& s, const LeafAssignment& x) {
  const uint8_t good = s.player == Player::Alice ? 0 : 1;
  for (uint64_t o : strategy_outcome_set(spec, s))
    if (x.bits[size_t(o)] != good) return false;
  return true;
}

double payoff_root(const GameSpec& spec, const std::vector<double>& leaf_values) {
  require(leaf_values.size() == outcome_count(spec), "payoff vector length must equal the outcome count");
  const uint64_t bc = level_shape(spec, spec.depth()).b_count;
  return evaluate_root<double, PayoffOps>(spec, [&](uint64_t a, double* out) {
    std::copy(leaf_values.begin() + long(a * bc), leaf_values.begin() + long((a + 1) * bc), out);
  });
}

std::vector<double> sample_optimal_payoff(const GameSpec& spec, uint64_t replicas, uint64_t seed) {
  validate_spec(spec);
  require(replicas >= 1, "replicas must be at least 1");
  const uint64_t bc = level_shape(spec, spec.depth()).b_count;
  std::vector<double> out(static_cast<size_t>(replicas));
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 16)
  for (uint64_t r = 0; r < replicas; ++r) {
    try {
      uint64_t key = stream_key(seed, Stream::Payoffs, r);
      out[r] = evaluate_root<double, PayoffOps>(spec, [&](uint64_t a, double* row) {
        for (uint64_t b = 0; b < bc; ++b) row[b] = to_unit_open(counter_word(key, a * bc + b));
      });
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace mmg
