#include "mmgame/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>

#include "mmgame/boolean.hpp"
#include "mmgame/column_map.hpp"
#include "mmgame/error.hpp"
#include "mmgame/rng.hpp"

namespace mmg {

std::string method_name(Method m) {
  switch (m) {
    case Method::ExactColumn: return "exact-column";
    case Method::Recursion: return "recursion";
    case Method::BruteForce: return "brute-force";
    case Method::MonteCarlo: return "mc";
    case Method::PayoffCdf: return "payoff-cdf";
  }
  return "?";
}

Method exact_method_for(const GameSpec& spec) {
  if (spec.alice_first()) {
    if (spec.family == Family::Ab || spec.family == Family::aB) return Method::ExactColumn;
    if (spec.family == Family::AB) return Method::Recursion;
  }
  if (outcome_count(spec) <= uint64_t(kMaxTableVars)) return Method::BruteForce;
  fail(ErrorCode::Domain, "no exact method for " + spec_name(spec) + " at n=" + std::to_string(spec.rounds));
}

Method parse_method(const std::string& name, const GameSpec& spec) {
  if (name == "exact") return exact_method_for(spec);
  if (name == "exact-column") return Method::ExactColumn;
  if (name == "recursion") return Method::Recursion;
  if (name == "brute-force") return Method::BruteForce;
  if (name == "mc") return Method::MonteCarlo;
  if (name == "payoff-cdf") return Method::PayoffCdf;
  fail(ErrorCode::InvalidArgument, "unknown method '" + name + "'");
}

namespace {

double exact_value(const GameSpec& spec, double p, Method m) {
  switch (m) {
    case Method::ExactColumn:
      if (!spec.alice_first() || (spec.family != Family::Ab && spec.family != Family::aB))
        fail(ErrorCode::Domain, "exact-column applies to Ab and aB with Alice moving first");
      if (spec.rounds > kMaxExactRounds)
        fail(ErrorCode::Budget, "exact-column supports n <= " + std::to_string(kMaxExactRounds));
      return spec.family == Family::Ab ? exact_win_prob_Ab(spec.rounds, p) : exact_win_prob_aB(spec.rounds, p);
    case Method::Recursion:
      if (spec.family != Family::AB || !spec.alice_first())
        fail(ErrorCode::Domain, "recursion applies to AB with Alice moving first");
      return ab_tree_recursion(spec.rounds, p);
    case Method::BruteForce:
      return brute_force_win_prob(spec, p);
    default:
      break;
  }
  fail(ErrorCode::InvalidArgument, "not an exact method: " + method_name(m));
}

bool is_exact(Method m) { return m == Method::ExactColumn || m == Method::Recursion || m == Method::BruteForce; }

Estimate cdf_estimate(const std::vector<double>& sorted, double p, uint64_t seed) {
  uint64_t k = uint64_t(std::upper_bound(sorted.begin(), sorted.end(), p) - sorted.begin());
  Interval ci = wilson(k, sorted.size());
  return Estimate{ci.mean, ci.low, ci.high, sorted.size(), seed};
}

void check_p(double p) { require(p >= 0 && p <= 1, "probability must lie in [0,1]"); }

// The scalar recursion has no graph to index, so any n is accepted there.
void check_spec_for(const GameSpec& spec, Method m) {
  if (m == Method::Recursion) {
    require(spec.rounds >= 0, "rounds must be nonnegative");
    return;
  }
  validate_spec(spec);
}

}  // namespace

Estimate evaluate_win_prob(const GameSpec& spec, double p, Method method, uint64_t replicas, uint64_t seed) {
  check_spec_for(spec, method);
  check_p(p);
  if (is_exact(method)) {
    double v = exact_value(spec, p, method);
    return Estimate{v, v, v, 0, seed};
  }
  if (method == Method::MonteCarlo) {
    WinProbEstimate e = mc_win_prob(spec, p, replicas, seed);
    return Estimate{e.mean, e.ci_low, e.ci_high, e.replicas, seed};
  }
  std::vector<double> u = sample_optimal_payoff(spec, replicas, seed);
  std::sort(u.begin(), u.end());
  return cdf_estimate(u, p, seed);
}

ThresholdEstimate threshold_bisect(const GameSpec& spec, double level, Method method, const BisectOptions& opt) {
  check_spec_for(spec, method);
  require(level > 0 && level < 1, "threshold level must lie strictly between 0 and 1");
  require(opt.tol > 0, "tolerance must be positive");
  require(opt.replicas >= 1, "replicas must be at least 1");

  ThresholdEstimate t;
  t.spec = spec;
  t.level = level;
  t.method = method;
  t.tol = opt.tol;

  std::vector<double> payoffs;
  if (method == Method::PayoffCdf) {
    payoffs = sample_optimal_payoff(spec, opt.replicas, opt.seed);
    std::sort(payoffs.begin(), payoffs.end());
    t.max_replicas = opt.replicas;
  }

  // Returns the point estimate; for mc the replica count grows until the
  // interval excludes `level` or is narrower than tol.
  auto f = [&](double p) -> double {
    ++t.evaluations;
    if (is_exact(method)) return exact_value(spec, p, method);
    if (method == Method::PayoffCdf) return cdf_estimate(payoffs, p, opt.seed).value;
    uint64_t r = opt.replicas;
    for (;;) {
      WinProbEstimate e = mc_win_prob(spec, p, r, opt.seed);
      t.max_replicas = std::max(t.max_replicas, r);
      double half = 0.5 * (e.ci_high - e.ci_low);
      if (e.ci_high < level || e.ci_low > level || half < 0.5 * opt.tol || r >= opt.max_replicas) return e.mean;
      r = std::min(opt.max_replicas, 2 * r);
    }
  };

  // P(0) = 0 and P(1) = 1 for every game, so [0,1] brackets any level.
  t.p_low = 0;
  t.p_high = 1;
  t.value_low = 0;
  t.value_high = 1;
  while (t.p_high - t.p_low > opt.tol) {
    double mid = 0.5 * (t.p_low + t.p_high);
    double v = f(mid);
    if (v <= level) {
      t.p_low = mid;
      t.value_low = v;
    } else {
      t.p_high = mid;
      t.value_high = v;
    }
  }
  return t;
}

InfluenceEstimate pivotal_influence(const GameSpec& spec, double p, uint64_t outcome, uint64_t replicas,
                                    uint64_t seed) {
  validate_spec(spec);
  check_p(p);
  require(replicas >= 1, "replicas must be at least 1");
  const uint64_t N = outcome_count(spec);
  require(outcome < N, "outcome ordinal out of range");
  const uint64_t blocks = (replicas + 63) / 64;
  uint64_t k = 0;
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : k)
  for (uint64_t b = 0; b < blocks; ++b) {
    try {
      PackedLeaves x = sample_packed_leaves(spec, p, seed, b);
      x.words[outcome] = 0;
      uint64_t r0 = eval_L_packed(spec, x);
      x.words[outcome] = ~uint64_t(0);
      uint64_t r1 = eval_L_packed(spec, x);
      uint64_t w = r0 ^ r1;
      uint64_t lanes = std::min<uint64_t>(64, replicas - 64 * b);
      if (lanes < 64) w &= (uint64_t(1) << lanes) - 1;
      k += uint64_t(std::popcount(w));
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return InfluenceEstimate{wilson(k, replicas), replicas};
}

std::vector<double> exact_influences(const GameSpec& spec, double p) {
  check_p(p);
  TruthTable L = game_truth_table(spec);
  const int N = L.vars;
  // weight of the other N-1 coordinates when the pivot set has k ones among them
  std::vector<double> w(size_t(N), 0.0);
  for (int k = 0; k < N; ++k) w[size_t(k)] = std::pow(p, k) * std::pow(1 - p, N - 1 - k);
  std::vector<double> inf(size_t(N), 0.0);
  const uint64_t full = uint64_t(1) << N;
  for (uint64_t x = 0; x < full; ++x) {
    if (!L(x)) continue;
    int ones = std::popcount(x);
    for (uint64_t rest = x; rest; rest &= rest - 1) {
      int v = std::countr_zero(rest);
      if (!L(x & ~(uint64_t(1) << v))) inf[size_t(v)] += w[size_t(ones - 1)];
    }
  }
  return inf;
}

namespace {

// Values of every vertex for one packed replica block, plus the root value
// after forcing a single outcome to 0 and to 1, propagated only through its
// ancestors.
class FlipPropagator {
 public:
  FlipPropagator(const GameSpec& spec, const PackedLeaves& x) : spec_(spec) {
    lv_ = evaluate_levels<uint64_t, BoolOps>(spec, x.words);
  }

  // Bit r set when outcome `k` is pivotal in lane r.
  uint64_t pivotal(uint64_t k) {
    const int D = spec_.depth();
    cur_.clear();
    cur_.push_back({k, 0, ~uint64_t(0)});
    for (int d = D - 1; d >= 0; --d) {
      nxt_.clear();
      for (const Entry& e : cur_) {
        for (const Vertex& u : parents(spec_, vertex_at(spec_, d + 1, e.ord))) {
          uint64_t uo = level_index(spec_, u);
          bool seen = false;
          for (const Entry& q : nxt_) seen = seen || q.ord == uo;
          if (!seen) nxt_.push_back({uo, 0, 0});
        }
      }
      const bool alice = turn(spec_, d) == Player::Alice;
      for (Entry& q : nxt_) {
        auto ch = children(spec_, vertex_at(spec_, d, q.ord));
        uint64_t c0[2], c1[2];
        for (int i = 0; i < 2; ++i) {
          uint64_t co = level_index(spec_, ch[size_t(i)]);
          c0[i] = c1[i] = lv_[size_t(d) + 1][co];
          for (const Entry& e : cur_)
            if (e.ord == co) {
              c0[i] = e.v0;
              c1[i] = e.v1;
            }
        }
        q.v0 = alice ? (c0[0] & c0[1]) : (c0[0] | c0[1]);
        q.v1 = alice ? (c1[0] & c1[1]) : (c1[0] | c1[1]);
      }
      std::swap(cur_, nxt_);
    }
    return cur_.front().v0 ^ cur_.front().v1;
  }

 private:
  struct Entry {
    uint64_t ord, v0, v1;
  };
  const GameSpec& spec_;
  std::vector<std::vector<uint64_t>> lv_;
  std::vector<Entry> cur_, nxt_;
};

double poly_derivative(const std::vector<uint64_t>& c, double p) {
  const int N = int(c.size()) - 1;
  double s = 0;
  for (int k = 0; k <= N; ++k) {
    if (c[size_t(k)] == 0) continue;
    double a = k > 0 ? k * std::pow(p, k - 1) * std::pow(1 - p, N - k) : 0.0;
    double b = k < N ? (N - k) * std::pow(p, k) * std::pow(1 - p, N - k - 1) : 0.0;
    s += double(c[size_t(k)]) * (a - b);
  }
  return s;
}

}  // namespace

InfluenceReport total_influence_check(const GameSpec& spec, double p, uint64_t replicas, uint64_t seed, double dp) {
  validate_spec(spec);
  require(p > 0 && p < 1, "influence check needs p in (0,1)");
  require(dp > 0 && p - 2 * dp >= 0 && p + 2 * dp <= 1, "finite-difference step must keep p +- 2dp inside [0,1]");
  require(replicas >= 2, "replicas must be at least 2");
  const uint64_t N = outcome_count(spec);
  InfluenceReport rep;
  rep.p = p;
  rep.dp = dp;
  rep.replicas = replicas;
  rep.per_outcome.assign(size_t(N), 0.0);

  const uint64_t blocks = (replicas + 63) / 64;
  std::vector<uint64_t> piv(size_t(N), 0);
  Moments mom;
  std::exception_ptr err;
#pragma omp parallel
  {
    std::vector<uint64_t> local(size_t(N), 0);
    Moments lm;
    std::vector<double> lane_k;
#pragma omp for schedule(dynamic, 1)
    for (uint64_t b = 0; b < blocks; ++b) {
      try {
        PackedLeaves x = sample_packed_leaves(spec, p, seed, b);
        FlipPropagator fp(spec, x);
        uint64_t lanes = std::min<uint64_t>(64, replicas - 64 * b);
        uint64_t mask = lanes < 64 ? (uint64_t(1) << lanes) - 1 : ~uint64_t(0);
        uint64_t lane_count[64] = {};
        for (uint64_t k = 0; k < N; ++k) {
          uint64_t w = fp.pivotal(k) & mask;
          local[k] += uint64_t(std::popcount(w));
          for (; w; w &= w - 1) ++lane_count[std::countr_zero(w)];
        }
        for (uint64_t r = 0; r < lanes; ++r) lm.add(double(lane_count[r]));
      } catch (...) {
#pragma omp critical
        err = std::current_exception();
      }
    }
#pragma omp critical
    {
      for (uint64_t k = 0; k < N; ++k) piv[k] += local[k];
      // Chan's parallel combination of running moments
      if (lm.n > 0) {
        uint64_t n = mom.n + lm.n;
        double delta = lm.mean - mom.mean;
        mom.m2 += lm.m2 + delta * delta * double(mom.n) * double(lm.n) / double(n);
        mom.mean += delta * double(lm.n) / double(n);
        mom.n = n;
      }
    }
  }
  if (err) std::rethrow_exception(err);
  for (uint64_t k = 0; k < N; ++k) rep.per_outcome[k] = double(piv[k]) / double(replicas);
  rep.total = mom.mean;
  rep.total_stderr = mom.stderr_mean();

  if (N <= uint64_t(kMaxTableVars)) {
    rep.derivative = poly_derivative(win_weight_counts(spec), p);
    rep.derivative_method = "polynomial";
  } else if (spec.alice_first() && spec.family != Family::ab &&
             (spec.family == Family::AB || spec.rounds <= kMaxExactRounds)) {
    Method m = exact_method_for(spec);
    auto P = [&](double q) { return exact_value(spec, q, m); };
    double d1 = (P(p + dp) - P(p - dp)) / (2 * dp);
    double d2 = (P(p + 2 * dp) - P(p - 2 * dp)) / (4 * dp);
    rep.derivative = (4 * d1 - d2) / 3;
    rep.bias_allowance = std::fabs(d1 - d2);
    rep.derivative_method = "richardson-" + method_name(m);
  } else {
    std::vector<double> u = sample_optimal_payoff(spec, replicas, mix64(seed ^ 0x5eed));
    uint64_t k = 0;
    for (double x : u) k += (x > p - dp && x <= p + dp) ? 1 : 0;
    double f = double(k) / double(replicas);
    rep.derivative = f / (2 * dp);
    rep.derivative_stderr = std::sqrt(f * (1 - f) / double(replicas)) / (2 * dp);
    rep.derivative_method = "payoff-density";
  }
  rep.tolerance = 3 * std::hypot(rep.total_stderr, rep.derivative_stderr) + rep.bias_allowance + 1e-9;
  rep.ok = std::fabs(rep.total - rep.derivative) <= rep.tolerance;
  return rep;
}

WindowEstimate critical_window(const GameSpec& spec, double eps, Method method, const BisectOptions& opt) {
  require(eps > 0 && eps <= 0.5, "window epsilon must lie in (0, 1/2]");
  WindowEstimate w;
  w.p_eps = threshold_bisect(spec, eps, method, opt).midpoint();
  w.p_one_minus_eps = eps == 0.5 ? w.p_eps : threshold_bisect(spec, 1 - eps, method, opt).midpoint();
  w.width = w.p_one_minus_eps - w.p_eps;
  w.scaled = w.width * spec.rounds;
  return w;
}

nlohmann::json bounds_report(const BoundsOptions& opt) {
  using nlohmann::json;
  json checks = json::array();
  bool all = true;
  auto add = [&](const std::string& name, bool ok, json details) {
    all = all && ok;
    checks.push_back({{"check", name}, {"status", ok ? "holds" : "violated"}, {"details", std::move(details)}});
  };

  BisectOptions bo;
  bo.tol = 1e-6;
  {
    GameSpec s{Family::Ab, opt.n_threshold, Player::Alice};
    double t = threshold_bisect(s, 0.5, Method::ExactColumn, bo).midpoint();
    add("Ab threshold in [1/2, 7/8]", t >= 0.5 && t <= 0.875, {{"n", opt.n_threshold}, {"threshold", t}});
  }
  {
    GameSpec s{Family::aB, opt.n_threshold, Player::Alice};
    double t = threshold_bisect(s, 0.5, Method::ExactColumn, bo).midpoint();
    double hi = (3 - std::sqrt(5.0)) / 2;
    add("aB threshold in [1/16, (3-sqrt5)/2]", t >= 1.0 / 16 && t <= hi, {{"n", opt.n_threshold}, {"threshold", t}});
  }
  {
    json rows = json::array();
    bool ok = true;
    for (int i = 1; i <= 9; ++i) {
      double p = 0.1 * i;
      double ab = exact_win_prob_Ab(opt.n_order, p);
      double tt = ab_tree_recursion(opt.n_order, p);
      double ba = exact_win_prob_aB(opt.n_order, p);
      bool row_ok = ab <= tt + 1e-12 && tt <= ba + 1e-12;
      ok = ok && row_ok;
      rows.push_back({{"p", p}, {"Ab", ab}, {"AB", tt}, {"aB", ba}, {"ok", row_ok}});
    }
    add("P^Ab <= P^AB <= P^aB", ok, {{"n", opt.n_order}, {"rows", rows}});
  }
  {
    GameSpec s{Family::ab, opt.n_ab, Player::Alice};
    WinProbEstimate lo = mc_win_prob(s, 0.01, opt.replicas, opt.seed);
    WinProbEstimate hi = mc_win_prob(s, 0.95, opt.replicas, mix64(opt.seed + 1));
    add("ab low-p trend", lo.mean < 0.1,
        {{"n", opt.n_ab}, {"p", 0.01}, {"estimate", lo.mean}, {"ci", {lo.ci_low, lo.ci_high}}, {"replicas", lo.replicas}});
    add("ab high-p trend", hi.mean > 0.9,
        {{"n", opt.n_ab}, {"p", 0.95}, {"estimate", hi.mean}, {"ci", {hi.ci_low, hi.ci_high}}, {"replicas", hi.replicas}});
  }
  return json{{"ok", all}, {"checks", checks}};
}

uint64_t cell_seed(uint64_t master, Family f, bool alice_first, int n, size_t p_index) {
  uint64_t h = mix64(master ^ 0x73776565702d6d6dULL);
  h = mix64(h + uint64_t(f) * 2 + (alice_first ? 0 : 1));
  h = mix64(h + uint64_t(n) * kGolden);
  return mix64(h + uint64_t(p_index) * 0xd1b54a32d192ed03ULL);
}

CsvTable sweep(const std::vector<GameSpec>& specs, const std::vector<int>& n_list, const std::vector<double>& p_grid,
               const std::string& method, uint64_t replicas, uint64_t seed) {
  CsvTable t;
  t.header = {"family", "n", "p", "method", "estimate", "ci_low", "ci_high", "replicas", "seed"};
  for (double p : p_grid) check_p(p);
  for (const GameSpec& base : specs) {
    for (int n : n_list) {
      GameSpec s = base;
      s.rounds = n;
      validate_spec(s);
      Method m = parse_method(method, s);
      std::vector<double> payoffs;
      uint64_t shared = cell_seed(seed, s.family, s.alice_first(), n, 0);
      if (m == Method::PayoffCdf) {
        payoffs = sample_optimal_payoff(s, replicas, shared);
        std::sort(payoffs.begin(), payoffs.end());
      }
      for (size_t i = 0; i < p_grid.size(); ++i) {
        double p = p_grid[i];
        Estimate e;
        if (m == Method::PayoffCdf) {
          e = cdf_estimate(payoffs, p, shared);
        } else {
          e = evaluate_win_prob(s, p, m, replicas, cell_seed(seed, s.family, s.alice_first(), n, i));
        }
        t.rows.push_back({spec_name(s), std::to_string(n), format_double(p), method_name(m), format_double(e.value),
                          format_double(e.ci_low), format_double(e.ci_high), std::to_string(e.replicas),
                          std::to_string(e.seed)});
      }
    }
  }
  return t;
}

}  // namespace mmg
