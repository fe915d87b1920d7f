// Acceptance checks. Each criterion prints one PASS/FAIL line; the exit code
// is nonzero when any selected criterion fails.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmgame/analysis.hpp"
#include "mmgame/automata.hpp"
#include "mmgame/column_map.hpp"
#include "mmgame/minimax.hpp"
#include "mmgame/stats.hpp"
#include "mmgame/toom.hpp"

using namespace mmg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

const Family kFamilies[] = {Family::AB, Family::Ab, Family::aB, Family::ab};
const double kGolden = (3 - std::sqrt(5.0)) / 2;

GameSpec alice(Family f, int n) { return GameSpec{f, n, Player::Alice}; }

Outcome oracle_agreement() {
  auto t0 = Clock::now();
  double worst = 0;
  for (Family f : kFamilies)
    for (int n : {1, 2})
      for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        GameSpec s = alice(f, n);
        double fast = 0;
        switch (f) {
          case Family::AB: fast = ab_tree_recursion(n, p); break;
          case Family::Ab: fast = exact_win_prob_Ab(n, p); break;
          case Family::aB: fast = exact_win_prob_aB(n, p); break;
          case Family::ab: fast = level_law_win_prob(s, p); break;
        }
        worst = std::fmax(worst, std::fabs(fast - brute_force_win_prob(s, p)));
      }
  double t = seconds_since(t0);
  return {worst <= 1e-12 && t < 10, fmt("max |fast - brute| = %.3g (<= 1e-12), %.2f s (< 10 s)", worst, t)};
}

Outcome tree_threshold() {
  auto t0 = Clock::now();
  double lo = ab_tree_recursion(200, 0.37), hi = ab_tree_recursion(200, 0.39);
  BisectOptions o;
  o.tol = 1e-7;
  double mid = threshold_bisect(alice(Family::AB, 100), 0.5, Method::Recursion, o).midpoint();
  double t = seconds_since(t0);
  bool ok = lo < 1e-6 && hi > 1 - 1e-6 && std::fabs(mid - kGolden) <= 1e-3 && t < 1;
  return {ok, fmt("P_200(0.37) = %.3g, 1 - P_200(0.39) = %.3g, crossing(n=100) = %.7f vs %.7f, %.3f s", lo, 1 - hi, mid,
                  kGolden, t)};
}

Outcome ab_tree_lattice_threshold() {
  auto t0 = Clock::now();
  BisectOptions o;
  o.tol = 1e-6;
  double mid = threshold_bisect(alice(Family::Ab, 20), 0.5, Method::ExactColumn, o).midpoint();
  bool monotone = true;
  std::string where;
  for (int n = 1; n <= 20; ++n) {
    double prev = -1;
    for (int i = 0; i <= 10; ++i) {
      double p = 0.66 + 0.01 * i;
      double v = exact_win_prob_Ab(n, p);
      if (v < prev && monotone) {
        monotone = false;
        where = fmt(" (first decrease n=%d p=%.2f)", n, p);
      }
      prev = v;
    }
  }
  double t = seconds_since(t0);
  bool ok = mid >= 0.69 && mid <= 0.73 && monotone && t < 60;
  return {ok, fmt("crossing(n=20) = %.6f (want [0.69, 0.73]), sweep monotone: %s%s, %.1f s", mid,
                  monotone ? "yes" : "no", where.c_str(), t)};
}

Outcome lattice_tree_threshold() {
  auto t0 = Clock::now();
  BisectOptions o;
  o.tol = 1e-6;
  double mid = threshold_bisect(alice(Family::aB, 20), 0.5, Method::ExactColumn, o).midpoint();
  double t = seconds_since(t0);
  bool ok = mid >= 0.14 && mid <= 0.18 && mid >= 1.0 / 16 && mid <= kGolden && t < 60;
  return {ok, fmt("crossing(n=20) = %.6f (want [0.14, 0.18] and [1/16, %.6f]), %.1f s", mid, kGolden, t)};
}

Outcome ordering() {
  std::string bad;
  // exact at n <= 2
  for (int n : {1, 2})
    for (int i = 1; i <= 9; ++i) {
      double p = 0.1 * i;
      double a = brute_force_win_prob(alice(Family::Ab, n), p);
      double m = brute_force_win_prob(alice(Family::AB, n), p);
      double b = brute_force_win_prob(alice(Family::aB, n), p);
      if (!(a <= m + 1e-15 && m <= b + 1e-15) && bad.empty()) bad = fmt("exact n=%d p=%.1f", n, p);
    }
  // 99% intervals at n in {4, 8}
  const uint64_t R = 1000000;
  int overlaps = 0;
  for (int n : {4, 8})
    for (int i = 1; i <= 9; ++i) {
      double p = 0.1 * i;
      uint64_t seed = 1000 * uint64_t(n) + uint64_t(i);
      auto a = mc_win_prob(alice(Family::Ab, n), p, R, seed, kZ99);
      auto m = mc_win_prob(alice(Family::AB, n), p, R, seed + 1, kZ99);
      auto b = mc_win_prob(alice(Family::aB, n), p, R, seed + 2, kZ99);
      if (a.ci_low > m.ci_high || m.ci_low > b.ci_high) {
        if (bad.empty()) bad = fmt("mc n=%d p=%.1f: Ab %.4f AB %.4f aB %.4f", n, p, a.mean, m.mean, b.mean);
      }
      overlaps += (a.mean > m.mean) + (m.mean > b.mean);
    }
  return {bad.empty(), fmt("exact n<=2 and 99%% CIs at n in {4,8} (1e6 replicas)%s; point estimates out of order "
                           "but within CI: %d",
                           bad.empty() ? "" : (": first violation " + bad).c_str(), overlaps)};
}

Outcome toom_soundness() {
  auto t0 = Clock::now();
  uint64_t checked = 0, failures = 0;
  for (Family f : {Family::Ab, Family::ab}) {
    GameSpec s = alice(f, 2);
    const uint64_t N = outcome_count(s);
    LeafAssignment x{s, std::vector<uint8_t>(N)};
    for (uint64_t m = 0; m < (uint64_t(1) << N); ++m) {
      for (uint64_t k = 0; k < N; ++k) x.bits[k] = (m >> k) & 1;
      if (eval_L(s, x)) continue;
      ++checked;
      ToomCycle c = construct_from_strategy(s, extract_strategy(s, x, Player::Alice));
      if (!validate(s, c).ok || !present(c, x)) ++failures;
    }
  }
  double t = seconds_since(t0);
  return {failures == 0 && t < 30,
          fmt("%llu assignments with L=0 over 4096 (Ab n=2) + 512 (ab n=2), %llu failures, %.2f s",
              (unsigned long long)checked, (unsigned long long)failures, t)};
}

Outcome census_law() {
  const GameSpec specs[] = {alice(Family::Ab, 1), alice(Family::ab, 1), GameSpec{Family::Ab, 1, Player::Bob},
                            GameSpec{Family::ab, 1, Player::Bob}};
  std::map<std::string, uint64_t> fail_by_spec, total_by_spec, bob_law_by_spec;
  uint64_t total = 0;
  for (int k = 0; k < 10000; ++k) {
    GameSpec s = specs[k % 4];
    s.rounds = 1 + (k / 4) % 8;
    ToomCycle c = construct_from_strategy(s, random_strategy(s, Player::Alice, uint64_t(k)));
    CycleCensus cs = census_counts(s, c);
    std::string name = spec_name(s);
    ++total_by_spec[name];
    ++total;
    if (!cs.six_equal) ++fail_by_spec[name];
    if (cs.bob_start_law) ++bob_law_by_spec[name];
  }
  uint64_t fails = 0;
  std::ostringstream os;
  for (auto& [name, n] : total_by_spec) {
    fails += fail_by_spec[name];
    os << " " << name << ": " << fail_by_spec[name] << "/" << n << " break the six-equal law";
    if (bob_law_by_spec[name]) os << " (" << bob_law_by_spec[name] << " satisfy su=sd=2m, others m, l=8m)";
    os << ";";
  }
  return {fails == 0, fmt("%llu cycles, n=1..8;", (unsigned long long)total) + os.str()};
}

Outcome peierls() {
  GameSpec ab = alice(Family::Ab, 10);
  double closed = 0.5 * std::pow(0.8, 10);  // q (rq)^n / (1 - rq), r=8, q=0.1
  auto tail = peierls_tail(ab, 10, 0.9);
  bool exact_ok = tail && std::fabs(*tail - closed) <= 1e-15 && std::fabs(closed - 0.0536870912) <= 1e-15;
  auto e = mc_win_prob(ab, 0.9, 1000000, 81);
  double half = 0.5 * (e.ci_high - e.ci_low);
  bool ab_ok = 1 - e.mean <= closed + 3 * half;

  // aB at p is bounded through the Bob-first tree/lattice game at 1-p.
  GameSpec ba = alice(Family::aB, 10);
  auto dual = peierls_tail(GameSpec{Family::Ab, 10, Player::Bob}, 10, 1 - 0.05);
  double dual_closed = 0.25 * std::pow(0.8, 10);  // r=16, q=0.05
  auto f = mc_win_prob(ba, 0.05, 1000000, 82);
  double half2 = 0.5 * (f.ci_high - f.ci_low);
  bool ba_ok = dual && std::fabs(*dual - dual_closed) <= 1e-15 && f.mean <= *dual + 3 * half2;
  return {exact_ok && ab_ok && ba_ok,
          fmt("tail(Ab,10,0.9) = %.12g (closed %.12g); 1-P^Ab_10(0.9) = %.5f <= %.5f + 3*%.5f; "
              "P^aB_10(0.05) = %.5f <= %.5f + 3*%.5f",
              tail ? *tail : NAN, closed, 1 - e.mean, closed, half, f.mean, dual ? *dual : NAN, half2)};
}

Outcome lattice_bounds() {
  GameSpec s = alice(Family::ab, 12);
  auto hi = mc_win_prob(s, 0.95, 100000, 91);
  auto lo = mc_win_prob(s, 0.01, 100000, 92);
  return {hi.mean > 0.9 && lo.mean < 0.1,
          fmt("P^ab_12(0.95) = %.5f (> 0.9), P^ab_12(0.01) = %.5f (< 0.1), 1e5 replicas", hi.mean, lo.mean)};
}

Outcome false_positive() {
  auto t0 = Clock::now();
  GameSpec s = alice(Family::ab, 4);
  FalsePositiveSearch r = find_false_positive(s, 10000000, 2024);
  if (!r.witness)
    return {false, fmt("no witness within %llu assignments (%s)", (unsigned long long)r.assignments,
                       r.exhaustive ? "exhaustive" : "randomized")};
  bool ok = validate(s, r.witness->cycle).ok && present(r.witness->cycle, r.witness->x) && eval_L(s, r.witness->x) == 1;
  return {ok, fmt("witness after %llu assignments (%s, budget 1e7), cycle length %zu, eval_L = %d, %.2f s",
                  (unsigned long long)r.assignments, r.exhaustive ? "exhaustive" : "randomized",
                  r.witness->cycle.length(), eval_L(s, r.witness->x), seconds_since(t0))};
}

Outcome origin_equivalence() {
  uint64_t mism = 0;
  std::string per;
  for (Family f : kFamilies) {
    OriginCheck c = verify_origin_equivalence(alice(f, 8), 0.5, 1000, 111 + uint64_t(f));
    mism += c.mismatches;
    per += fmt(" %s:%llu", spec_name(alice(f, 8)).c_str(), (unsigned long long)c.mismatches);
  }
  return {mism == 0, "1000 trials per family at n=8, mismatches" + per};
}

Outcome russo() {
  GameSpec s = alice(Family::Ab, 1);
  auto inf = exact_influences(s, 0.5);
  double total = 0;
  for (double v : inf) total += v;
  // P = (1 - (1-p)^2)^2, so dP/dp = 4 (1 - (1-p)^2)(1-p)
  double deriv = 4 * (1 - 0.25) * 0.5;
  bool exact_ok = total == deriv;
  std::string bad;
  int checks = 0;
  for (Family f : kFamilies)
    for (int n = 1; n <= 6; ++n) {
      InfluenceReport r = total_influence_check(alice(f, n), 0.5, 20000, 1200 + uint64_t(10 * int(f) + n));
      ++checks;
      if (!r.ok && bad.empty())
        bad = fmt(" first disagreement %s n=%d: %.4f vs %.4f (tol %.4f)", spec_name(alice(f, n)).c_str(), n, r.total,
                  r.derivative, r.tolerance);
    }
  return {exact_ok && bad.empty(),
          fmt("Ab n=1 p=0.5: sum of influences %.17g, dP/dp %.17g; "
              "MC vs dP/dp within 3 sigma at p=0.5 for %d family/n cells%s",
              total, deriv, checks, bad.c_str())};
}

Outcome window_scaling() {
  BisectOptions o;
  o.tol = 1e-8;
  std::map<int, double> w;
  for (int n : {8, 12, 16, 20}) w[n] = critical_window(alice(Family::Ab, n), 0.25, Method::ExactColumn, o).width;
  bool ok = true;
  std::string rows;
  for (auto [n, width] : w) {
    double cap = w[8] * 8.0 / n * 1.5;
    ok = ok && width <= cap;
    rows += fmt(" n=%d width %.6f cap %.6f;", n, width, cap);
  }
  return {ok, "eps=0.25:" + rows};
}

Outcome performance() {
  auto t0 = Clock::now();
  double v = exact_win_prob_Ab(20, 0.7);
  double te = seconds_since(t0);
  t0 = Clock::now();
  auto e = mc_win_prob(alice(Family::Ab, 20), 0.7, 10000, 14);
  double tm = seconds_since(t0);
  return {te < 10 && tm < 60, fmt("exact_win_prob_Ab(20, 0.7) = %.6f in %.2f s (< 10 s); mc with 1e4 replicas = "
                                  "%.4f in %.1f s (< 60 s)",
                                  v, te, e.mean, tm)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> which;
  app.add_option("--criterion", which, "Criterion numbers to run (default: all)")->check(CLI::Range(1, 14));
  CLI11_PARSE(app, argc, argv);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> all = {
      {"oracle agreement", oracle_agreement},
      {"tree threshold", tree_threshold},
      {"Ab threshold near 0.71", ab_tree_lattice_threshold},
      {"aB threshold", lattice_tree_threshold},
      {"ordering Ab <= AB <= aB", ordering},
      {"Toom soundness", toom_soundness},
      {"census law", census_law},
      {"Peierls bounds", peierls},
      {"ab bounds", lattice_bounds},
      {"false-positive search", false_positive},
      {"automaton origin equivalence", origin_equivalence},
      {"influence identity", russo},
      {"window scaling", window_scaling},
      {"performance", performance},
  };
  if (which.empty())
    for (int i = 1; i <= 14; ++i) which.push_back(i);
  int failed = 0;
  for (int i : which) {
    auto& [name, fn] = all[size_t(i - 1)];
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", i, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
