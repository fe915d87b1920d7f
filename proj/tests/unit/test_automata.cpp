#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mmgame/automata.hpp"
#include "mmgame/error.hpp"
#include "mmgame/minimax.hpp"
#include "oracles.hpp"

using namespace mmg;

TEST_CASE("origin of the automaton equals the game value") {
  for (Family f : {Family::AB, Family::Ab, Family::aB, Family::ab})
    for (double p : {0.3, 0.5, 0.7}) {
      GameSpec s{f, 4, Player::Alice};
      OriginCheck c = verify_origin_equivalence(s, p, 200, 99);
      CHECK(c.trials == 200);
      CHECK(c.mismatches == 0);
    }
}

TEST_CASE("automaton origin matches the reference evaluator on the same bits") {
  GameSpec s{Family::Ab, 2, Player::Alice};
  BitGrid g = initial_bits(s, 0.5, 4);
  // cell (i,j) is outcome ordinal i*height + j
  std::vector<uint8_t> bits(outcome_count(s));
  for (uint64_t i = 0; i < g.width; ++i)
    for (uint64_t j = 0; j < g.height; ++j) bits[i * g.height + j] = g.at(i, j);
  CHECK(evolve_origin_from(s, g) == oracle::eval(s, bits));
}

TEST_CASE("window arithmetic per rule") {
  RuleSchedule AB = schedule_for(Family::AB, ValueKind::Real);
  RuleSchedule ab = schedule_for(Family::ab, ValueKind::Real);
  uint64_t w = 16, h = 16;
  next_window(AB, 1, w, h);
  CHECK(w == 16);
  CHECK(h == 8);
  next_window(AB, 2, w, h);
  CHECK(w == 8);
  w = 5;
  h = 5;
  next_window(ab, 1, w, h);
  CHECK(h == 4);
  next_window(ab, 2, w, h);
  CHECK(w == 4);
  uint64_t one = 1, two = 2;
  CHECK_THROWS_AS(next_window(ab, 1, two, one), Error);
  CHECK(schedule_name(parse_schedule("aB", ValueKind::Bit)) == "aB");
}

TEST_CASE("a real step uses max on even steps and min on odd steps") {
  RuleSchedule s = schedule_for(Family::AB, ValueKind::Real);
  RealGrid g{2, 2, 0, {0.1, 0.9, 0.4, 0.3}};
  RealGrid r = step(g, s, 1);  // rows j=0 and j=1 merged by min
  REQUIRE(r.height == 1);
  CHECK(r.at(0, 0) == 0.1);
  CHECK(r.at(1, 0) == 0.3);
  RealGrid q = step(r, s, 2);
  CHECK(q.at(0, 0) == 0.3);
}

TEST_CASE("property: thresholding commutes with the real-valued steps") {
  RuleSchedule real = schedule_for(Family::Ab, ValueKind::Real);
  RuleSchedule bit = schedule_for(Family::Ab, ValueKind::Bit);
  RealGrid g = initial_uniforms(64, 40, 12);
  for (double p : {0.2, 0.5, 0.8}) {
    RealGrid r = g;
    BitGrid b = threshold(g, p);
    for (int t = 1; t <= 8; ++t) {
      r = step(r, real, t);
      b = step(b, bit, t);
      CHECK(threshold(r, p).cells == b.cells);
    }
  }
}

TEST_CASE("initial uniforms have mean one half") {
  RealGrid g = initial_uniforms(256, 256, 3);
  double m = std::accumulate(g.cells.begin(), g.cells.end(), 0.0) / double(g.cells.size());
  CHECK(std::fabs(m - 0.5) < 4 * std::sqrt(1.0 / 12 / double(g.cells.size())));
}

TEST_CASE("snapshot series returns the requested times") {
  RuleSchedule s = schedule_for(Family::ab, ValueKind::Real);
  auto frames = snapshot_series(s, 32, 32, {0, 1, 4}, 7);
  REQUIRE(frames.size() == 3);
  CHECK(frames[0].time == 0);
  CHECK(frames[2].time == 4);
  CHECK(frames[2].width == 30);
  CHECK(frames[2].height == 30);
  CHECK_THROWS_AS(snapshot_series(s, 4, 4, {0, 10}, 7), Error);
  CHECK_THROWS_AS(snapshot_series(s, 32, 32, {3, 1}, 7), Error);
  std::string pgm = frame_pgm(frames[1]);
  CHECK(pgm.rfind("P5\n32 31\n255\n", 0) == 0);
}

TEST_CASE("bob-first specs are refused by the automaton") {
  CHECK_THROWS_AS(initial_bits(GameSpec{Family::AB, 2, Player::Bob}, 0.5, 1), Error);
}
