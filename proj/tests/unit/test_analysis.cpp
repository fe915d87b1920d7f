#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mmgame/analysis.hpp"
#include "mmgame/column_map.hpp"
#include "mmgame/error.hpp"
#include "oracles.hpp"

using namespace mmg;

namespace {
// P[flipping outcome k changes L] by enumeration with the reference evaluator.
double oracle_influence(const GameSpec& s, double p, uint64_t k) {
  const uint64_t N = oracle::outcomes(s);
  double total = 0;
  std::vector<uint8_t> bits(N);
  for (uint64_t x = 0; x < (uint64_t(1) << N); ++x) {
    if ((x >> k) & 1) continue;
    int ones = 0;
    for (uint64_t j = 0; j < N; ++j) ones += bits[j] = (x >> j) & 1;
    int v0 = oracle::eval(s, bits);
    bits[k] = 1;
    int v1 = oracle::eval(s, bits);
    if (v0 != v1) total += std::pow(p, ones) * std::pow(1 - p, double(N - 1) - ones);
  }
  return total;
}
}  // namespace

TEST_CASE("method names and exact resolution") {
  GameSpec ab{Family::Ab, 3, Player::Alice};
  CHECK(parse_method("exact", ab) == Method::ExactColumn);
  CHECK(parse_method("exact", GameSpec{Family::AB, 50, Player::Alice}) == Method::Recursion);
  CHECK(parse_method("exact", GameSpec{Family::ab, 3, Player::Alice}) == Method::BruteForce);
  CHECK_THROWS_AS(parse_method("exact", GameSpec{Family::ab, 9, Player::Alice}), Error);
  CHECK_THROWS_AS(parse_method("guess", ab), Error);
  for (Method m : {Method::ExactColumn, Method::Recursion, Method::BruteForce, Method::MonteCarlo, Method::PayoffCdf})
    CHECK(parse_method(method_name(m), ab) == m);
}

TEST_CASE("bisection keeps the level bracketed") {
  GameSpec s{Family::Ab, 10, Player::Alice};
  BisectOptions o;
  o.tol = 1e-6;
  for (double level : {0.1, 0.5, 0.9}) {
    ThresholdEstimate t = threshold_bisect(s, level, Method::ExactColumn, o);
    CHECK(t.p_high - t.p_low <= o.tol);
    CHECK(exact_win_prob_Ab(10, t.p_low) <= level);
    CHECK(exact_win_prob_Ab(10, t.p_high) > level);
  }
  CHECK_THROWS_AS(threshold_bisect(s, 1.0, Method::ExactColumn, o), Error);
}

TEST_CASE("tree recursion bisection accepts large n") {
  BisectOptions o;
  o.tol = 1e-6;
  ThresholdEstimate t = threshold_bisect(GameSpec{Family::AB, 100, Player::Alice}, 0.5, Method::Recursion, o);
  CHECK(std::fabs(t.midpoint() - (3 - std::sqrt(5.0)) / 2) < 1e-3);
}

TEST_CASE("monte carlo bisection lands near the exact crossing") {
  GameSpec s{Family::aB, 6, Player::Alice};
  BisectOptions o;
  o.tol = 0.01;
  o.seed = 4;
  double exact = threshold_bisect(s, 0.5, Method::ExactColumn, o).midpoint();
  CHECK(std::fabs(threshold_bisect(s, 0.5, Method::MonteCarlo, o).midpoint() - exact) < 0.03);
  o.replicas = 1 << 16;
  CHECK(std::fabs(threshold_bisect(s, 0.5, Method::PayoffCdf, o).midpoint() - exact) < 0.03);
}

TEST_CASE("window at one half has zero width") {
  BisectOptions o;
  WindowEstimate w = critical_window(GameSpec{Family::Ab, 8, Player::Alice}, 0.5, Method::ExactColumn, o);
  CHECK(w.width == 0);
  WindowEstimate v = critical_window(GameSpec{Family::Ab, 8, Player::Alice}, 0.25, Method::ExactColumn, o);
  CHECK(v.width > 0);
  CHECK(v.scaled == doctest::Approx(8 * v.width));
  CHECK_THROWS_AS(critical_window(GameSpec{Family::Ab, 8, Player::Alice}, 0.6, Method::ExactColumn, o), Error);
}

TEST_CASE("exact influences match flip enumeration") {
  for (Family f : {Family::AB, Family::Ab, Family::aB, Family::ab}) {
    GameSpec s{f, 1, Player::Alice};
    auto inf = exact_influences(s, 0.3);
    for (uint64_t k = 0; k < inf.size(); ++k) CHECK(inf[k] == doctest::Approx(oracle_influence(s, 0.3, k)).epsilon(1e-12));
  }
}

TEST_CASE("total influence of Ab n=1 at one half equals the derivative 3/2") {
  GameSpec s{Family::Ab, 1, Player::Alice};
  auto inf = exact_influences(s, 0.5);
  double total = std::accumulate(inf.begin(), inf.end(), 0.0);
  double h = 1e-5;
  double deriv = (oracle::win_prob(s, 0.5 + h) - oracle::win_prob(s, 0.5 - h)) / (2 * h);
  CHECK(total == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(deriv == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("property: monte carlo total influence agrees with the derivative") {
  for (Family f : {Family::AB, Family::Ab, Family::aB, Family::ab}) {
    InfluenceReport r = total_influence_check(GameSpec{f, 2, Player::Alice}, 0.4, 20000, 6);
    CHECK_MESSAGE(r.ok, r.total, " vs ", r.derivative, " tol ", r.tolerance);
    CHECK(r.per_outcome.size() == outcome_count(GameSpec{f, 2, Player::Alice}));
  }
}

TEST_CASE("pivotal influence interval covers the exact influence") {
  GameSpec s{Family::Ab, 2, Player::Alice};
  auto exact = exact_influences(s, 0.6);
  InfluenceEstimate e = pivotal_influence(s, 0.6, 5, 50000, 3);
  CHECK(e.influence.low - 0.01 <= exact[5]);
  CHECK(exact[5] <= e.influence.high + 0.01);
}

TEST_CASE("sweep rows, endpoints and seeds") {
  CsvTable t = sweep({GameSpec{Family::Ab, 1, Player::Alice}}, {2, 3}, {0.0, 0.5, 1.0}, "exact", 0, 1);
  REQUIRE(t.rows.size() == 6);
  CHECK(t.rows[0][4] == "0");
  CHECK(t.rows[2][4] == "1");
  CHECK(t.rows[0][3] == "exact-column");
  CsvTable m = sweep({GameSpec{Family::ab, 1, Player::Bob}}, {3}, {0.0, 0.5, 1.0}, "mc", 256, 9);
  CHECK(m.rows[0][4] == "0");
  CHECK(m.rows[2][4] == "1");
  CHECK(m.rows[1][8] == std::to_string(cell_seed(9, Family::ab, false, 3, 1)));
  CHECK(cell_seed(9, Family::ab, false, 3, 1) != cell_seed(9, Family::ab, true, 3, 1));
  CsvTable again = sweep({GameSpec{Family::ab, 1, Player::Bob}}, {3}, {0.0, 0.5, 1.0}, "mc", 256, 9);
  CHECK(again.rows == m.rows);
}

TEST_CASE("bounds report on small settings") {
  BoundsOptions o;
  o.n_threshold = 8;
  o.n_ab = 6;
  o.replicas = 5000;
  nlohmann::json r = bounds_report(o);
  CHECK(r["checks"].size() == 5);
  CHECK(r["checks"][2]["status"] == "holds");
}
