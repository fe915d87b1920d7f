#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mmgame/column_map.hpp"
#include "mmgame/error.hpp"
#include "mmgame/minimax.hpp"
#include "oracles.hpp"

using namespace mmg;

namespace {
ColumnLaw random_law(int m, std::mt19937_64& g) {
  std::gamma_distribution<double> gam(0.7, 1.0);
  std::vector<double> v(size_t(1) << m);
  double s = 0;
  for (auto& x : v) s += (x = gam(g));
  for (auto& x : v) x /= s;
  return make_law(m, v);
}
}  // namespace

TEST_CASE("upset transform and its inverse are mutually inverse") {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int m = 0; m <= 8; ++m) {
    std::vector<double> v(size_t(1) << m), w;
    for (auto& x : v) x = u(g);
    w = v;
    upset_transform(w);
    // brute-force superset sums
    for (size_t x = 0; x < v.size(); ++x) {
      double s = 0;
      for (size_t y = 0; y < v.size(); ++y)
        if ((y & x) == x) s += v[y];
      CHECK(w[x] == doctest::Approx(s).epsilon(1e-12));
    }
    upset_inverse(w);
    for (size_t x = 0; x < v.size(); ++x) CHECK(w[x] == doctest::Approx(v[x]).epsilon(1e-12));
  }
  std::vector<double> bad(3, 0.0);
  CHECK_THROWS_AS(upset_transform(bad), Error);
}

TEST_CASE("fast F_A agrees with the direct double sum") {
  std::mt19937_64 g(2);
  for (int m = 1; m <= 7; ++m)
    for (int t = 0; t < 3; ++t) {
      ColumnLaw law = random_law(m, g);
      ColumnLaw a = apply_FA(law), b = apply_FA_direct(law);
      REQUIRE(a.m == b.m);
      for (size_t i = 0; i < a.prob.size(); ++i) CHECK(a.prob[i] == doctest::Approx(b.prob[i]).epsilon(1e-12));
    }
}

TEST_CASE("maps preserve mass and shrink the column as documented") {
  std::mt19937_64 g(3);
  ColumnLaw law = random_law(6, g);
  ColumnLaw fb = apply_Fb(law);
  CHECK(fb.m == 5);
  CHECK(total_mass(fb) == doctest::Approx(1.0));
  ColumnLaw fa = apply_FA(law);
  CHECK(fa.m == 6);
  CHECK(total_mass(fa) == doctest::Approx(1.0));
}

TEST_CASE("F_b on a deterministic column ORs neighbours") {
  // y = (1,0,0,1): y'(j) = y(j) | y(j+1) = (1,0,1)
  ColumnLaw d = delta_law(4, 0b1001);
  ColumnLaw r = apply_Fb(d);
  CHECK(r.m == 3);
  CHECK(r.prob[0b101] == doctest::Approx(1.0));
}

TEST_CASE("F_A of a product law is the product law at p squared") {
  ColumnLaw law = product_law(5, 0.6);
  ColumnLaw a = apply_FA(law);
  ColumnLaw q = product_law(5, 0.36);
  for (size_t i = 0; i < a.prob.size(); ++i) CHECK(a.prob[i] == doctest::Approx(q.prob[i]).epsilon(1e-12));
}

TEST_CASE("column computation matches brute force for Ab and aB") {
  for (int n = 1; n <= 2; ++n)
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      CHECK(exact_win_prob_Ab(n, p) == doctest::Approx(oracle::win_prob(GameSpec{Family::Ab, n, Player::Alice}, p)).epsilon(1e-12));
      CHECK(exact_win_prob_aB(n, p) == doctest::Approx(oracle::win_prob(GameSpec{Family::aB, n, Player::Alice}, p)).epsilon(1e-12));
    }
}

TEST_CASE("column computation agrees with monte carlo at n=6") {
  for (double p : {0.2, 0.7}) {
    auto e = mc_win_prob(GameSpec{Family::Ab, 6, Player::Alice}, p, 50000, 17, 3.5);
    double x = exact_win_prob_Ab(6, p);
    CHECK(x >= e.ci_low);
    CHECK(x <= e.ci_high);
    auto f = mc_win_prob(GameSpec{Family::aB, 6, Player::Alice}, p, 50000, 18, 3.5);
    double y = exact_win_prob_aB(6, p);
    CHECK(y >= f.ci_low);
    CHECK(y <= f.ci_high);
  }
}

TEST_CASE("property: exact probabilities are monotone in p and within [0,1]") {
  for (int n : {3, 8, 12}) {
    double pa = -1, pb = -1;
    for (int i = 0; i <= 20; ++i) {
      double p = 0.05 * i;
      double a = exact_win_prob_Ab(n, p), b = exact_win_prob_aB(n, p);
      CHECK(a >= pa - 1e-15);
      CHECK(b >= pb - 1e-15);
      CHECK(a >= -1e-15);
      CHECK(a <= 1 + 1e-15);
      pa = a;
      pb = b;
    }
  }
}

TEST_CASE("density bounds hold along the exact iteration") {
  for (double p : {0.3, 0.71, 0.9}) {
    int seen = 0;
    exact_win_prob_Ab(10, p, [&](const ColumnLaw& law) {
      DensityReport r = check_density_bounds(law);
      CHECK_MESSAGE(r.ok, r.violation);
      CHECK(r.stationarity_defect < 1e-9);
      ++seen;
    });
    CHECK(seen == 11);
  }
}

TEST_CASE("column length guard") {
  CHECK_THROWS_AS(product_law(kMaxColumnLength + 1, 0.5), Error);
  CHECK_THROWS_AS(exact_win_prob_Ab(kMaxExactRounds + 1, 0.5), Error);
  CHECK_THROWS_AS(make_law(2, {0.5, 0.5, 0.5, 0.5}), Error);
}

TEST_CASE("law CSV lists every pattern") {
  std::string csv = law_to_csv(product_law(2, 0.5));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}
