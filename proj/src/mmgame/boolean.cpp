#include "mmgame/boolean.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <set>

#include "mmgame/error.hpp"

namespace mmg {

TruthTable make_truth_table(int vars, const std::function<bool(uint64_t)>& f) {
  if (vars < 0 || vars > kMaxTableVars)
    fail(ErrorCode::Budget, "truth tables are limited to " + std::to_string(kMaxTableVars) + " variables, requested " +
                                std::to_string(vars));
  TruthTable L{vars, std::vector<uint8_t>(size_t(1) << vars)};
  for (uint64_t x = 0; x < L.value.size(); ++x) L.value[x] = f(x) ? 1 : 0;
  return L;
}

TruthTable game_truth_table(const GameSpec& spec) {
  validate_spec(spec);
  const uint64_t N = outcome_count(spec);
  if (N > uint64_t(kMaxTableVars))
    fail(ErrorCode::Budget, "truth table of " + spec_name(spec) + " n=" + std::to_string(spec.rounds) + " needs " +
                                std::to_string(N) + " variables, limit is " + std::to_string(kMaxTableVars));
  check_budget(uint64_t(1) << N, "truth table");
  static const uint64_t kLow[6] = {0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
                                   0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
  TruthTable L{int(N), std::vector<uint8_t>(size_t(1) << N)};
  const uint64_t total = uint64_t(1) << N;
  const uint64_t step = N >= 6 ? 64 : total;
  const uint64_t bc = level_shape(spec, spec.depth()).b_count;
  std::vector<uint64_t> words(static_cast<size_t>(N));
  for (uint64_t base = 0; base < total; base += step) {
    for (uint64_t k = 0; k < N; ++k) words[k] = k < 6 ? kLow[k] : (((base >> k) & 1) ? ~uint64_t(0) : 0);
    uint64_t res = evaluate_root<uint64_t, BoolOps>(spec, [&](uint64_t a, uint64_t* out) {
      std::copy(words.begin() + long(a * bc), words.begin() + long((a + 1) * bc), out);
    });
    for (uint64_t r = 0; r < step; ++r) L.value[base + r] = uint8_t((res >> r) & 1);
  }
  return L;
}

bool is_monotone(const TruthTable& L) {
  for (uint64_t x = 0; x < L.value.size(); ++x) {
    if (!L(x)) continue;
    for (int i = 0; i < L.vars; ++i)
      if (!L(x | (uint64_t(1) << i))) return false;
  }
  return true;
}

TruthTable random_monotone(int vars, int generators, double inclusion, uint64_t seed) {
  require(generators >= 1, "at least one generator set is needed");
  require(inclusion >= 0 && inclusion <= 1, "inclusion probability must lie in [0,1]");
  CounterRng rng(seed, Stream::Generic, uint64_t(vars));
  TruthTable L = make_truth_table(vars, [](uint64_t) { return false; });
  for (int g = 0; g < generators; ++g) {
    uint64_t m = 0;
    for (int i = 0; i < vars; ++i)
      if (rng.bernoulli(inclusion)) m |= uint64_t(1) << i;
    L.value[size_t(m)] = 1;
  }
  for (int i = 0; i < vars; ++i) {
    uint64_t bit = uint64_t(1) << i;
    for (uint64_t x = 0; x < L.value.size(); ++x)
      if (!(x & bit)) L.value[x | bit] |= L.value[x];
  }
  return L;
}

static void require_minimal_input(const TruthTable& L) {
  if (L.vars > 20)
    fail(ErrorCode::Budget, "minimal set enumeration is limited to 20 variables, requested " + std::to_string(L.vars));
  require(is_monotone(L), "minimal one/zero sets need a monotone function");
}

bool is_one_set(const TruthTable& L, uint64_t A) { return L(A & L.full()); }
bool is_zero_set(const TruthTable& L, uint64_t Z) { return !L(L.full() & ~Z); }

SetFamily minimal_one_sets(const TruthTable& L) {
  require_minimal_input(L);
  SetFamily out;
  for (uint64_t x = 0; x < L.value.size(); ++x) {
    if (!L(x)) continue;
    bool minimal = true;
    for (uint64_t r = x; r && minimal; r &= r - 1)
      if (L(x & ~(r & -r))) minimal = false;
    if (minimal) out.push_back(x);
  }
  return out;
}

SetFamily minimal_zero_sets(const TruthTable& L) {
  require_minimal_input(L);
  SetFamily out;
  const uint64_t full = L.full();
  for (uint64_t z = 0; z < L.value.size(); ++z) {
    uint64_t x = full & ~z;
    if (L(x)) continue;
    bool minimal = true;
    for (uint64_t r = z; r && minimal; r &= r - 1)
      if (!L(x | (r & -r))) minimal = false;
    if (minimal) out.push_back(z);
  }
  return out;
}

nlohmann::json to_json(const ClaimReport& r) {
  return nlohmann::json{{"claim", r.claim},
                        {"instance", r.instance},
                        {"status", r.status},
                        {"witness", r.witness},
                        {"details", r.details}};
}

namespace {

void child_ordinals(const GameSpec& spec, int d, uint64_t i, uint64_t out[2]) {
  auto ch = children(spec, vertex_at(spec, d, i));
  out[0] = level_index(spec, ch[0]);
  out[1] = level_index(spec, ch[1]);
}

void sort_unique(std::vector<uint64_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

struct StrategyWalker {
  const GameSpec& spec;
  Player player;
  uint64_t limit;
  uint64_t visited = 0;
  const std::function<void(const std::vector<uint64_t>&)>& visit;

  void rec(int d, const std::vector<uint64_t>& reach) {
    if (d == spec.depth()) {
      if (++visited > limit)
        fail(ErrorCode::Budget, "strategy enumeration exceeds the limit of " + std::to_string(limit) + " strategies");
      visit(reach);
      return;
    }
    std::vector<uint64_t> next;
    next.reserve(2 * reach.size());
    uint64_t c[2];
    if (turn(spec, d) != player) {
      for (uint64_t i : reach) {
        child_ordinals(spec, d, i, c);
        next.push_back(c[0]);
        next.push_back(c[1]);
      }
      sort_unique(next);
      rec(d + 1, next);
      return;
    }
    if (reach.size() >= 40)
      fail(ErrorCode::Budget, "strategy enumeration needs 2^" + std::to_string(reach.size()) +
                                  " choices at depth " + std::to_string(d) + ", limit is " + std::to_string(limit));
    std::vector<std::array<uint64_t, 2>> kids(reach.size());
    for (size_t k = 0; k < reach.size(); ++k) child_ordinals(spec, d, reach[k], kids[k].data());
    const uint64_t combos = uint64_t(1) << reach.size();
    if (combos > limit)
      fail(ErrorCode::Budget, "strategy enumeration needs at least " + std::to_string(combos) +
                                  " strategies, limit is " + std::to_string(limit));
    for (uint64_t mask = 0; mask < combos; ++mask) {
      next.clear();
      for (size_t k = 0; k < reach.size(); ++k) next.push_back(kids[k][(mask >> k) & 1]);
      sort_unique(next);
      rec(d + 1, next);
    }
  }
};

std::string outcome_name(const GameSpec& spec, uint64_t ordinal) {
  return vertex_to_string(spec, vertex_at(spec, spec.depth(), ordinal));
}

nlohmann::json mask_names(const GameSpec& spec, uint64_t mask) {
  nlohmann::json a = nlohmann::json::array();
  for (uint64_t r = mask; r; r &= r - 1) a.push_back(outcome_name(spec, uint64_t(std::countr_zero(r))));
  return a;
}

std::string instance_name(const GameSpec& spec) { return spec_name(spec) + " n=" + std::to_string(spec.rounds); }

}  // namespace

void for_each_strategy_outcome_set(const GameSpec& spec, Player player, uint64_t limit,
                                   const std::function<void(const std::vector<uint64_t>&)>& visit) {
  validate_spec(spec);
  StrategyWalker w{spec, player, limit, 0, visit};
  w.rec(0, std::vector<uint64_t>{0});
}

std::vector<uint64_t> random_strategy_outcome_set(const GameSpec& spec, Player player, CounterRng& rng) {
  validate_spec(spec);
  std::vector<uint64_t> reach{0}, next;
  uint64_t c[2];
  for (int d = 0; d < spec.depth(); ++d) {
    next.clear();
    bool mine = turn(spec, d) == player;
    for (uint64_t i : reach) {
      child_ordinals(spec, d, i, c);
      if (mine) {
        next.push_back(c[rng() & 1]);
      } else {
        next.push_back(c[0]);
        next.push_back(c[1]);
      }
    }
    sort_unique(next);
    reach.swap(next);
  }
  return reach;
}

ClaimReport verify_strategy_sandwich(const GameSpec& spec) {
  validate_spec(spec);
  ClaimReport rep{"Z(L) in Z_strat in Z_up(L) and A(L) in A_strat in A_up(L)", instance_name(spec), "holds", nullptr, {}};
  if (outcome_count(spec) > 16)
    fail(ErrorCode::Budget, "strategy sandwich check is limited to 16 outcomes, " + instance_name(spec) + " has " +
                                std::to_string(outcome_count(spec)));
  TruthTable L = game_truth_table(spec);
  SetFamily zmin = minimal_zero_sets(L), amin = minimal_one_sets(L);
  auto collect = [&](Player pl) {
    std::set<uint64_t> fam;
    for_each_strategy_outcome_set(spec, pl, uint64_t(1) << 24, [&](const std::vector<uint64_t>& s) {
      uint64_t m = 0;
      for (uint64_t o : s) m |= uint64_t(1) << o;
      fam.insert(m);
    });
    return fam;
  };
  std::set<uint64_t> zstrat = collect(Player::Alice), astrat = collect(Player::Bob);
  auto violate = [&](const std::string& what, uint64_t mask) {
    if (rep.status != "holds") return;
    rep.status = "violated";
    rep.witness = nlohmann::json{{"failure", what}, {"set", mask_names(spec, mask)}};
  };
  for (uint64_t z : zmin)
    if (!zstrat.count(z)) violate("minimal zero-set is not a strategy outcome set", z);
  for (uint64_t z : zstrat)
    if (!is_zero_set(L, z)) violate("strategy outcome set of Alice is not a zero-set", z);
  for (uint64_t a : amin)
    if (!astrat.count(a)) violate("minimal one-set is not a strategy outcome set", a);
  for (uint64_t a : astrat)
    if (!is_one_set(L, a)) violate("strategy outcome set of Bob is not a one-set", a);
  uint64_t ones = uint64_t(std::count(L.value.begin(), L.value.end(), uint8_t(1)));
  uint64_t zeros = L.value.size() - ones;
  rep.details = nlohmann::json{{"minimal_zero_sets", zmin.size()},
                               {"alice_outcome_sets", zstrat.size()},
                               {"zero_sets", zeros},
                               {"minimal_one_sets", amin.size()},
                               {"bob_outcome_sets", astrat.size()},
                               {"one_sets", ones},
                               {"zero_lower_strict", zstrat.size() > zmin.size()},
                               {"zero_upper_strict", zeros > zstrat.size()},
                               {"one_lower_strict", astrat.size() > amin.size()},
                               {"one_upper_strict", ones > astrat.size()}};
  return rep;
}

Side project_ell(const Side& word) {
  require(word.len <= 62, "word too long");
  uint64_t twos = uint64_t(std::popcount(word.code));
  return Side{word.len, word.len - twos};
}

Vertex ell1(const Vertex& v) { return Vertex{project_ell(v.a), v.b}; }
Vertex ell2(const Vertex& v) { return Vertex{v.a, project_ell(v.b)}; }

ClaimReport verify_projection(int n, uint64_t trials, uint64_t seed) {
  require(n >= 0 && n <= 6, "projection check supports 0 <= n <= 6");
  GameSpec AB{Family::AB, n}, Ab{Family::Ab, n}, aB{Family::aB, n};
  ClaimReport rep{"L_Ab(x) = L_AB(x o ell2) and L_aB(x) = L_AB(x o ell1)", "n=" + std::to_string(n), "holds", nullptr,
                  {}};
  const uint64_t W = uint64_t(1) << n;
  CounterRng rng(seed, Stream::Generic, 11);
  uint64_t checked = 0;
  auto run = [&](const GameSpec& coarse, const LeafAssignment& x, bool project_a) {
    LeafAssignment lifted{AB, std::vector<uint8_t>(size_t(W * W))};
    for (uint64_t a = 0; a < W; ++a)
      for (uint64_t b = 0; b < W; ++b) {
        Vertex v{Side{uint32_t(n), a}, Side{uint32_t(n), b}};
        Vertex w = project_a ? ell1(v) : ell2(v);
        lifted.bits[size_t(a * W + b)] = x.bits[size_t(level_index(coarse, w))];
      }
    int lhs = eval_L(coarse, x), rhs = eval_L(AB, lifted);
    ++checked;
    if (lhs != rhs && rep.status == "holds") {
      rep.status = "violated";
      std::string bits;
      for (uint8_t b : x.bits) bits += char('0' + b);
      rep.witness = nlohmann::json{{"spec", spec_name(coarse)}, {"x", bits}, {"coarse", lhs}, {"lifted", rhs}};
    }
  };
  for (const GameSpec* coarse : {&Ab, &aB}) {
    bool project_a = coarse == &aB;
    run(*coarse, constant_leaves(*coarse, false), project_a);
    run(*coarse, constant_leaves(*coarse, true), project_a);
    for (uint64_t t = 0; t < trials; ++t) {
      LeafAssignment x{*coarse, std::vector<uint8_t>(size_t(outcome_count(*coarse)))};
      for (auto& b : x.bits) b = uint8_t(rng() & 1);
      run(*coarse, x, project_a);
    }
  }
  rep.details = nlohmann::json{{"evaluations", checked}, {"trials_per_family", trials}, {"seed", seed}};
  return rep;
}

std::string profile_name(Profile p) {
  switch (p) {
    case Profile::Minus: return "f-";
    case Profile::Plus: return "f+";
    case Profile::First: return "f1";
    case Profile::Second: return "f2";
    case Profile::Or: return "f_or";
    case Profile::And: return "f_and";
  }
  return "?";
}

Profile two_point_profile(const TruthTable& L, uint64_t x, int i1, int i2) {
  require(i1 != i2, "the two points must differ");
  require(i1 >= 0 && i1 < L.vars && i2 >= 0 && i2 < L.vars, "variable index out of range");
  const uint64_t b1 = uint64_t(1) << i1, b2 = uint64_t(1) << i2;
  const uint64_t base = x & ~(b1 | b2) & L.full();
  int v00 = L(base), v10 = L(base | b1), v01 = L(base | b2), v11 = L(base | b1 | b2);
  int code = v00 | (v10 << 1) | (v01 << 2) | (v11 << 3);
  switch (code) {
    case 0b0000: return Profile::Minus;
    case 0b1111: return Profile::Plus;
    case 0b1010: return Profile::First;
    case 0b1100: return Profile::Second;
    case 0b1110: return Profile::Or;
    case 0b1000: return Profile::And;
  }
  fail(ErrorCode::Invariant, "two-point restriction is not monotone (values " + std::to_string(v00) +
                                 std::to_string(v10) + std::to_string(v01) + std::to_string(v11) + ")");
}

namespace {

// weight[k] = p^k (1-p)^(m-k)
std::vector<double> weights(int m, double p) {
  std::vector<double> w(size_t(m) + 1);
  for (int k = 0; k <= m; ++k) w[size_t(k)] = std::pow(p, k) * std::pow(1 - p, m - k);
  return w;
}

double win_probability(const TruthTable& L, double p) {
  auto w = weights(L.vars, p);
  double s = 0;
  for (uint64_t x = 0; x < L.value.size(); ++x)
    if (L(x)) s += w[size_t(std::popcount(x))];
  return s;
}

// P[L(x)=1] when variables in the same class share one Bernoulli(p) value;
// rep[i] is the class label of variable i, labels 0..classes-1.
double glued_probability(const TruthTable& L, const std::vector<int>& rep, int classes, double p) {
  auto w = weights(classes, p);
  std::vector<uint64_t> members(size_t(classes), 0);
  for (int i = 0; i < L.vars; ++i) members[size_t(rep[size_t(i)])] |= uint64_t(1) << i;
  double s = 0;
  for (uint64_t y = 0; y < (uint64_t(1) << classes); ++y) {
    uint64_t x = 0;
    for (int c = 0; c < classes; ++c)
      if ((y >> c) & 1) x |= members[size_t(c)];
    if (L(x)) s += w[size_t(std::popcount(y))];
  }
  return s;
}

}  // namespace

ContractionCheck contraction_identity_check(const TruthTable& L, int i1, int i2, double p) {
  require(L.vars <= 16, "contraction check is limited to 16 variables");
  require(p >= 0 && p <= 1, "probability must lie in [0,1]");
  require(i1 != i2 && i1 >= 0 && i2 >= 0 && i1 < L.vars && i2 < L.vars, "need two distinct variables");
  ContractionCheck c;
  std::vector<int> rep(size_t(L.vars));
  int next = 0;
  for (int i = 0; i < L.vars; ++i) rep[size_t(i)] = i == i2 ? -1 : next++;
  rep[size_t(i2)] = rep[size_t(i1)];
  c.lhs = win_probability(L, p) - glued_probability(L, rep, L.vars - 1, p);
  const uint64_t b12 = (uint64_t(1) << i1) | (uint64_t(1) << i2);
  auto w = weights(L.vars - 2, p);
  double por = 0, pand = 0;
  for (uint64_t x = 0; x < L.value.size(); ++x) {
    if (x & b12) continue;
    Profile f = two_point_profile(L, x, i1, i2);
    double wt = w[size_t(std::popcount(x))];
    if (f == Profile::Or) por += wt;
    if (f == Profile::And) pand += wt;
  }
  c.rhs = p * (1 - p) * (por - pand);
  c.ok = std::fabs(c.lhs - c.rhs) <= 1e-12;
  return c;
}

ClaimReport verify_compar(const TruthTable& L, const std::vector<int>& psi, int targets, double p, bool zero_sets) {
  require(L.vars <= 16, "comparison check is limited to 16 variables");
  require(int(psi.size()) == L.vars, "psi must map every variable");
  require(targets >= 1 && targets <= 16, "target set size must lie in [1,16]");
  for (int t : psi) require(t >= 0 && t < targets, "psi maps outside the target set");
  require(p >= 0 && p <= 1, "probability must lie in [0,1]");
  ClaimReport rep{zero_sets ? "P[L(Y o psi)=1] >= P[L(X)=1]" : "P[L(Y o psi)=1] <= P[L(X)=1]",
                  std::to_string(L.vars) + " variables, " + std::to_string(targets) + " targets, p=" +
                      std::to_string(p),
                  "holds", nullptr, {}};
  auto image = [&](uint64_t set) {
    uint64_t m = 0;
    for (uint64_t r = set; r; r &= r - 1) m |= uint64_t(1) << psi[size_t(std::countr_zero(r))];
    return m;
  };
  for (uint64_t A : zero_sets ? minimal_zero_sets(L) : minimal_one_sets(L))
    if (std::popcount(image(A)) != std::popcount(A)) {
      rep.status = "inapplicable";
      rep.witness = nlohmann::json{{"minimal_set", A}, {"image", image(A)}};
      return rep;
    }
  // Chain of pair contractions, gluing each target's preimage in increasing order.
  std::vector<int> cls(size_t(L.vars));
  for (int i = 0; i < L.vars; ++i) cls[size_t(i)] = i;
  auto relabel = [&](std::vector<int>& labels) {
    std::vector<int> map(size_t(L.vars), -1);
    int c = 0;
    for (int& l : labels) {
      if (map[size_t(l)] < 0) map[size_t(l)] = c++;
      l = map[size_t(l)];
    }
    return c;
  };
  std::vector<double> chain{win_probability(L, p)};
  for (int t = 0; t < targets; ++t) {
    int first = -1;
    for (int i = 0; i < L.vars; ++i) {
      if (psi[size_t(i)] != t) continue;
      if (first < 0) {
        first = i;
        continue;
      }
      int from = cls[size_t(i)], to = cls[size_t(first)];
      for (int& c : cls)
        if (c == from) c = to;
      std::vector<int> labels = cls;
      int classes = relabel(labels);
      chain.push_back(glued_probability(L, labels, classes, p));
    }
  }
  const double px = chain.front(), py = chain.back();
  const double tol = 1e-12;
  bool ok = true;
  for (size_t k = 1; k < chain.size(); ++k)
    ok = ok && (zero_sets ? chain[k] >= chain[k - 1] - tol : chain[k] <= chain[k - 1] + tol);
  if (!ok) {
    rep.status = "violated";
    rep.witness = nlohmann::json{{"chain", chain}};
  }
  rep.details = nlohmann::json{{"p_x", px},
                               {"p_y_psi", py},
                               {"chain", chain},
                               {"gluing_order", "lexicographic by target, then by variable"},
                               {"note", "any gluing order yields the same endpoint values"}};
  return rep;
}

ClaimReport verify_tree_property(int n, uint64_t samples, uint64_t seed) {
  require(n >= 1 && n <= 4, "tree property check supports 1 <= n <= 4");
  GameSpec spec{Family::AB, n};
  const uint64_t W = uint64_t(1) << n;
  ClaimReport rep{"each Z(sigma1) meets every Bob word once and each A(sigma2) meets every Alice word once",
                  instance_name(spec), "holds", nullptr, {}};
  auto check = [&](const std::vector<uint64_t>& s, bool alice) {
    std::vector<int> hits(size_t(W), 0);
    for (uint64_t o : s) hits[size_t(alice ? o % W : o / W)]++;
    bool good = s.size() == W && std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
    if (!good && rep.status == "holds") {
      rep.status = "violated";
      nlohmann::json names = nlohmann::json::array();
      for (uint64_t o : s) names.push_back(outcome_name(spec, o));
      rep.witness = nlohmann::json{{"player", alice ? "Alice" : "Bob"}, {"outcome_set", names}};
    }
  };
  uint64_t alice = 0, bob = 0;
  for_each_strategy_outcome_set(spec, Player::Alice, uint64_t(1) << 20, [&](const std::vector<uint64_t>& s) {
    check(s, true);
    ++alice;
  });
  // Bob has 2^(2^(n+1)-2) reachable strategies.
  const int bob_log = (1 << (n + 1)) - 2;
  const bool bob_exhaustive = bob_log <= 20;
  if (bob_exhaustive) {
    for_each_strategy_outcome_set(spec, Player::Bob, uint64_t(1) << 20, [&](const std::vector<uint64_t>& s) {
      check(s, false);
      ++bob;
    });
  } else {
    CounterRng rng(seed, Stream::Strategies, uint64_t(n));
    for (uint64_t k = 0; k < samples; ++k, ++bob) check(random_strategy_outcome_set(spec, Player::Bob, rng), false);
  }
  rep.details = nlohmann::json{{"alice_strategies", alice},
                               {"alice_mode", "exhaustive"},
                               {"bob_strategies", bob},
                               {"bob_mode", bob_exhaustive ? "exhaustive" : "sampled"},
                               {"outcome_set_size", W}};
  return rep;
}

}  // namespace mmg
