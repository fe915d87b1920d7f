#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmgame/mmgame.h"

namespace {
std::string take(char* s) {
  std::string r = s ? s : "";
  mmg_string_free(s);
  return r;
}
nlohmann::json take_json(char* s) { return nlohmann::json::parse(take(s)); }
}  // namespace

TEST_CASE("spec parsing and names") {
  mmg_spec s;
  REQUIRE(mmg_spec_parse("Ab'", 3, &s) == MMG_OK);
  CHECK(s.family == MMG_FAMILY_Ab);
  CHECK(s.bob_first == 1);
  char* name = nullptr;
  REQUIRE(mmg_spec_name(s, &name) == MMG_OK);
  CHECK(take(name) == "Ab'");
  uint64_t n = 0;
  REQUIRE(mmg_outcome_count(s, &n) == MMG_OK);
  CHECK(n == 32);
  CHECK(mmg_spec_parse("XY", 3, &s) != MMG_OK);
  CHECK(std::string(mmg_last_error()).size() > 0);
  CHECK(mmg_spec_parse(nullptr, 3, &s) == MMG_INVALID_ARGUMENT);
}

TEST_CASE("win probability through the C boundary") {
  mmg_spec s{MMG_FAMILY_Ab, 1, 0};
  mmg_estimate e;
  REQUIRE(mmg_win_prob(s, 0.5, "brute-force", 0, 0, &e) == MMG_OK);
  CHECK(e.value == doctest::Approx(0.5625));
  REQUIRE(mmg_win_prob(s, 0.5, "exact", 0, 0, &e) == MMG_OK);
  CHECK(e.value == doctest::Approx(0.5625));
  char* r = nullptr;
  REQUIRE(mmg_win_prob_rational(s, 0.5, &r) == MMG_OK);
  CHECK(take(r) == "9/16");
  REQUIRE(mmg_win_prob(s, 0.5, "mc", 4096, 3, &e) == MMG_OK);
  CHECK(e.replicas == 4096);
  CHECK(e.ci_low <= 0.5625);
  CHECK(e.ci_high >= 0.5625);
  CHECK(mmg_win_prob(s, 1.5, "exact", 0, 0, &e) == MMG_INVALID_ARGUMENT);
  CHECK(mmg_win_prob(s, 0.5, "nope", 0, 0, &e) == MMG_INVALID_ARGUMENT);
  double v = 0;
  REQUIRE(mmg_ab_tree_recursion(1, 0.5, &v) == MMG_OK);
  CHECK(v == doctest::Approx(0.5625));
}

TEST_CASE("leaves, strategies and cycles") {
  mmg_spec s{MMG_FAMILY_ab, 2, 0};
  std::vector<uint8_t> bits(9, 0);
  mmg_leaves* x = nullptr;
  REQUIRE(mmg_leaves_create(s, bits.data(), bits.size(), &x) == MMG_OK);
  int32_t L = -1;
  REQUIRE(mmg_leaves_eval(x, &L) == MMG_OK);
  CHECK(L == 0);
  mmg_strategy* st = nullptr;
  REQUIRE(mmg_strategy_extract(x, MMG_ALICE, &st) == MMG_OK);
  int32_t win = 0;
  REQUIRE(mmg_strategy_is_winning(st, x, &win) == MMG_OK);
  CHECK(win == 1);
  mmg_strategy* bob = nullptr;
  CHECK(mmg_strategy_extract(x, MMG_BOB, &bob) == MMG_NO_STRATEGY);

  mmg_cycle* c = nullptr;
  REQUIRE(mmg_cycle_construct(st, &c) == MMG_OK);
  int32_t ok = 0, present = 0;
  int64_t idx = 0;
  REQUIRE(mmg_cycle_validate(c, &ok, &idx, nullptr) == MMG_OK);
  CHECK(ok == 1);
  REQUIRE(mmg_cycle_present(c, x, &present) == MMG_OK);
  CHECK(present == 1);
  char* js = nullptr;
  REQUIRE(mmg_cycle_census(c, &js) == MMG_OK);
  auto census = take_json(js);
  CHECK(census["six_equal"] == true);
  REQUIRE(mmg_cycle_to_json(c, &js) == MMG_OK);
  std::string text = take(js);
  mmg_cycle* d = nullptr;
  REQUIRE(mmg_cycle_from_json(text.c_str(), &d) == MMG_OK);
  REQUIRE(mmg_cycle_to_json(d, &js) == MMG_OK);
  CHECK(take(js) == text);
  CHECK(mmg_cycle_from_json("{not json", &d) == MMG_PARSE);

  mmg_cycle_free(d);
  mmg_cycle_free(c);
  mmg_strategy_free(st);
  mmg_leaves_free(x);
  CHECK(mmg_leaves_create(s, bits.data(), 3, &x) == MMG_INVALID_ARGUMENT);
}

TEST_CASE("budget refusals map to their own status") {
  uint64_t saved = mmg_memory_budget();
  REQUIRE(mmg_set_memory_budget(1024) == MMG_OK);
  mmg_leaves* x = nullptr;
  CHECK(mmg_leaves_sample(mmg_spec{MMG_FAMILY_AB, 10, 0}, 0.5, 1, &x) == MMG_BUDGET);
  REQUIRE(mmg_set_memory_budget(saved) == MMG_OK);
}

TEST_CASE("automaton frames") {
  int32_t times[] = {0, 2};
  mmg_frames* f = nullptr;
  REQUIRE(mmg_ca_snapshot("ab", 8, 8, times, 2, 1, &f) == MMG_OK);
  CHECK(mmg_frames_count(f) == 2);
  int32_t t = 0;
  uint64_t w = 0, h = 0;
  REQUIRE(mmg_frame_info(f, 1, &t, &w, &h) == MMG_OK);
  CHECK(t == 2);
  CHECK(w == 7);
  CHECK(h == 7);
  char* bytes = nullptr;
  uint64_t len = 0;
  REQUIRE(mmg_frame_pgm(f, 1, &bytes, &len) == MMG_OK);
  CHECK(len == std::string("P5\n7 7\n255\n").size() + 49);
  mmg_string_free(bytes);
  CHECK(mmg_frame_info(f, 5, &t, &w, &h) == MMG_INVALID_ARGUMENT);
  mmg_frames_free(f);

  char* js = nullptr;
  REQUIRE(mmg_ca_verify(mmg_spec{MMG_FAMILY_Ab, 3, 0}, 0.5, 50, 2, &js) == MMG_OK);
  CHECK(take_json(js)["details"]["mismatches"] == 0);
}

TEST_CASE("claims and reports") {
  char* js = nullptr;
  REQUIRE(mmg_verify_sandwich(mmg_spec{MMG_FAMILY_Ab, 2, 0}, &js) == MMG_OK);
  CHECK(take_json(js)["status"] == "holds");
  REQUIRE(mmg_verify_projection(2, 50, 1, &js) == MMG_OK);
  CHECK(take_json(js)["status"] == "holds");
  REQUIRE(mmg_verify_treeprop(2, 10, 1, &js) == MMG_OK);
  CHECK(take_json(js)["status"] == "holds");
  REQUIRE(mmg_verify_compar(nullptr, 6, 3, 0.4, nullptr, 0, 3, 0.5, 1, 4, &js) == MMG_OK);
  CHECK(take_json(js).contains("status"));
  double tail = 0;
  int32_t finite = 0;
  REQUIRE(mmg_peierls_tail(mmg_spec{MMG_FAMILY_Ab, 10, 0}, 10, 0.9, &tail, &finite) == MMG_OK);
  CHECK(finite == 1);
  CHECK(tail == doctest::Approx(0.0536870912));
  REQUIRE(mmg_threshold(mmg_spec{MMG_FAMILY_AB, 100, 0}, 0.5, "recursion", 1e-6, 0, 0, 0, &js) == MMG_OK);
  auto th = take_json(js);
  CHECK(th["p_low"].get<double>() < 0.382);
  CHECK(th["p_high"].get<double>() > 0.3819);
  int32_t ns[] = {1};
  double ps[] = {0.0, 1.0};
  REQUIRE(mmg_sweep("Ab,aB", ns, 1, ps, 2, "exact", 0, 0, &js) == MMG_OK);
  std::string csv = take(js);
  CHECK(csv.rfind("family,n,p,method,estimate,ci_low,ci_high,replicas,seed\n", 0) == 0);
  char* fd = nullptr;
  REQUIRE(mmg_format_double(0.1, &fd) == MMG_OK);
  CHECK(take(fd) == "0.1");
}
