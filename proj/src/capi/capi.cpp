#include "mmgame/mmgame.h"

#include <cstdlib>
#include <cstring>
#include <limits>
#include <optional>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmgame/analysis.hpp"
#include "mmgame/automata.hpp"
#include "mmgame/boolean.hpp"
#include "mmgame/column_map.hpp"
#include "mmgame/error.hpp"
#include "mmgame/io.hpp"
#include "mmgame/minimax.hpp"
#include "mmgame/toom.hpp"

struct mmg_leaves {
  mmg::LeafAssignment x;
};
struct mmg_strategy {
  mmg::Strategy s;
};
struct mmg_cycle {
  mmg::ToomCycle c;
};
struct mmg_frames {
  std::vector<mmg::RealGrid> frames;
  std::vector<int> times;
};

namespace {

thread_local std::string g_last_error;

template <class F>
mmg_status guarded(F&& f) {
  try {
    f();
    return MMG_OK;
  } catch (const mmg::Error& e) {
    g_last_error = e.what();
    return static_cast<mmg_status>(static_cast<int>(e.code()));
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return MMG_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MMG_BUDGET;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MMG_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return MMG_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

void need(const void* p, const char* what) {
  if (!p) mmg::fail(mmg::ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

mmg::GameSpec to_spec(mmg_spec s) {
  if (s.family < 0 || s.family > 3) mmg::fail(mmg::ErrorCode::InvalidArgument, "unknown family code");
  mmg::GameSpec g{static_cast<mmg::Family>(s.family), s.rounds, s.bob_first ? mmg::Player::Bob : mmg::Player::Alice};
  mmg::validate_spec(g);
  return g;
}

// Like to_spec but without the indexability check (for closed-form routines).
mmg::GameSpec to_spec_loose(mmg_spec s) {
  if (s.family < 0 || s.family > 3) mmg::fail(mmg::ErrorCode::InvalidArgument, "unknown family code");
  if (s.rounds < 0) mmg::fail(mmg::ErrorCode::InvalidArgument, "rounds must be nonnegative");
  return mmg::GameSpec{static_cast<mmg::Family>(s.family), s.rounds, s.bob_first ? mmg::Player::Bob : mmg::Player::Alice};
}

mmg_spec from_spec(const mmg::GameSpec& g) {
  return mmg_spec{static_cast<int32_t>(g.family), g.rounds, g.alice_first() ? 0 : 1};
}

mmg::Player to_player(int32_t p) {
  if (p != MMG_ALICE && p != MMG_BOB) mmg::fail(mmg::ErrorCode::InvalidArgument, "player must be 0 (Alice) or 1 (Bob)");
  return p == MMG_ALICE ? mmg::Player::Alice : mmg::Player::Bob;
}

void put_json(char** out, const nlohmann::json& j) {
  need(out, "output pointer");
  *out = dup(j.dump(2));
}

nlohmann::json census_json(const mmg::CycleCensus& c) {
  nlohmann::json counts;
  for (int t = 0; t < 6; ++t) counts[mmg::step_name(static_cast<mmg::StepType>(t))] = c.counts[size_t(t)];
  return {{"counts", counts},       {"m", c.m},
          {"outcomes", c.outcomes}, {"length", c.length},
          {"six_equal", c.six_equal}, {"bob_start_law", c.bob_start_law}};
}

}  // namespace

extern "C" {

const char* mmg_version(void) { return "1.0.0"; }
const char* mmg_last_error(void) { return g_last_error.c_str(); }
void mmg_string_free(char* s) { std::free(s); }

mmg_status mmg_set_memory_budget(uint64_t bytes) {
  return guarded([&] {
    mmg::require(bytes > 0, "memory budget must be positive");
    mmg::set_memory_budget(bytes);
  });
}
uint64_t mmg_memory_budget(void) { return mmg::memory_budget(); }

mmg_status mmg_spec_parse(const char* name, int32_t rounds, mmg_spec* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "output pointer");
    mmg::require(rounds >= 0, "rounds must be nonnegative");
    mmg::GameSpec g = mmg::parse_spec(name, 0);
    g.rounds = rounds;
    *out = from_spec(g);
  });
}

mmg_status mmg_spec_name(mmg_spec spec, char** out) {
  return guarded([&] {
    need(out, "output pointer");
    *out = dup(mmg::spec_name(to_spec_loose(spec)));
  });
}

mmg_status mmg_outcome_count(mmg_spec spec, uint64_t* out) {
  return guarded([&] {
    need(out, "output pointer");
    *out = mmg::outcome_count(to_spec(spec));
  });
}

mmg_status mmg_outcome_name(mmg_spec spec, uint64_t ordinal, char** out) {
  return guarded([&] {
    need(out, "output pointer");
    mmg::GameSpec g = to_spec(spec);
    mmg::require(ordinal < mmg::outcome_count(g), "outcome ordinal out of range");
    *out = dup(mmg::vertex_to_string(g, mmg::vertex_at(g, g.depth(), ordinal)));
  });
}

mmg_status mmg_leaves_create(mmg_spec spec, const uint8_t* bits, uint64_t len, mmg_leaves** out) {
  return guarded([&] {
    need(out, "output pointer");
    mmg::GameSpec g = to_spec(spec);
    if (len) need(bits, "bits");
    std::vector<uint8_t> v(bits, bits + len);
    *out = new mmg_leaves{mmg::make_leaves(g, std::move(v))};
  });
}

mmg_status mmg_leaves_sample(mmg_spec spec, double p, uint64_t seed, mmg_leaves** out) {
  return guarded([&] {
    need(out, "output pointer");
    *out = new mmg_leaves{mmg::sample_leaves(to_spec(spec), p, seed)};
  });
}

mmg_status mmg_leaves_bits(const mmg_leaves* x, uint8_t* buf, uint64_t len) {
  return guarded([&] {
    need(x, "leaves");
    mmg::require(len == x->x.bits.size(), "buffer length must equal the outcome count");
    if (len) {
      need(buf, "buffer");
      std::memcpy(buf, x->x.bits.data(), len);
    }
  });
}

mmg_status mmg_leaves_eval(const mmg_leaves* x, int32_t* out) {
  return guarded([&] {
    need(x, "leaves");
    need(out, "output pointer");
    *out = mmg::eval_L(x->x.spec, x->x);
  });
}

void mmg_leaves_free(mmg_leaves* x) { delete x; }

mmg_status mmg_strategy_extract(const mmg_leaves* x, int32_t player, mmg_strategy** out) {
  return guarded([&] {
    need(x, "leaves");
    need(out, "output pointer");
    *out = new mmg_strategy{mmg::extract_strategy(x->x.spec, x->x, to_player(player))};
  });
}

mmg_status mmg_strategy_random(mmg_spec spec, int32_t player, uint64_t seed, mmg_strategy** out) {
  return guarded([&] {
    need(out, "output pointer");
    *out = new mmg_strategy{mmg::random_strategy(to_spec(spec), to_player(player), seed)};
  });
}

mmg_status mmg_strategy_is_winning(const mmg_strategy* s, const mmg_leaves* x, int32_t* out) {
  return guarded([&] {
    need(s, "strategy");
    need(x, "leaves");
    need(out, "output pointer");
    mmg::require(s->s.spec == x->x.spec, "strategy and leaves belong to different games");
    *out = mmg::is_winning(x->x.spec, s->s, x->x) ? 1 : 0;
  });
}

void mmg_strategy_free(mmg_strategy* s) { delete s; }

mmg_status mmg_win_prob(mmg_spec spec, double p, const char* method, uint64_t replicas, uint64_t seed,
                        mmg_estimate* out) {
  return guarded([&] {
    need(method, "method");
    need(out, "output pointer");
    mmg::GameSpec g = to_spec_loose(spec);
    mmg::Method m = mmg::parse_method(method, g);
    mmg::Estimate e = mmg::evaluate_win_prob(g, p, m, replicas, seed);
    *out = mmg_estimate{e.value, e.ci_low, e.ci_high, e.replicas, e.seed};
  });
}

mmg_status mmg_win_prob_rational(mmg_spec spec, double p, char** out) {
  return guarded([&] {
    need(out, "output pointer");
    *out = dup(mmg::brute_force_win_prob_exact(to_spec(spec), p));
  });
}

mmg_status mmg_ab_tree_recursion(int32_t n, double p, double* out) {
  return guarded([&] {
    need(out, "output pointer");
    mmg::require(n >= 0, "rounds must be nonnegative");
    *out = mmg::ab_tree_recursion(n, p);
  });
}

mmg_status mmg_column_trace(mmg_spec spec, double p, char** json) {
  return guarded([&] {
    mmg::GameSpec g = to_spec(spec);
    mmg::require(g.alice_first() && (g.family == mmg::Family::Ab || g.family == mmg::Family::aB),
                 "column trace applies to Ab and aB with Alice moving first");
    nlohmann::json steps = nlohmann::json::array();
    auto observe = [&](const mmg::ColumnLaw& law) {
      mmg::DensityReport r = mmg::check_density_bounds(law);
      steps.push_back({{"m", law.m},
                       {"density", r.d},
                       {"mass", mmg::total_mass(law)},
                       {"stationarity_defect", r.stationarity_defect},
                       {"bounds_ok", r.ok},
                       {"violation", r.violation}});
    };
    double v = g.family == mmg::Family::Ab ? mmg::exact_win_prob_Ab(g.rounds, p, observe)
                                           : mmg::exact_win_prob_aB(g.rounds, p, observe);
    put_json(json, {{"spec", mmg::spec_name(g)}, {"n", g.rounds}, {"p", p}, {"value", v}, {"laws", steps}});
  });
}

mmg_status mmg_threshold(mmg_spec spec, double level, const char* method, double tol, uint64_t replicas,
                         uint64_t max_replicas, uint64_t seed, char** json) {
  return guarded([&] {
    need(method, "method");
    mmg::GameSpec g = to_spec_loose(spec);
    mmg::Method m = mmg::parse_method(method, g);
    mmg::BisectOptions o;
    o.tol = tol;
    o.replicas = replicas > 0 ? replicas : o.replicas;
    o.max_replicas = max_replicas > 0 ? max_replicas : o.max_replicas;
    o.seed = seed;
    mmg::ThresholdEstimate t = mmg::threshold_bisect(g, level, m, o);
    put_json(json, {{"spec", mmg::spec_name(g)},
                    {"n", g.rounds},
                    {"level", level},
                    {"method", mmg::method_name(t.method)},
                    {"p_low", t.p_low},
                    {"p_high", t.p_high},
                    {"value_low", t.value_low},
                    {"value_high", t.value_high},
                    {"estimate", t.midpoint()},
                    {"tol", t.tol},
                    {"evaluations", t.evaluations},
                    {"max_replicas", t.max_replicas},
                    {"seed", seed}});
  });
}

mmg_status mmg_window(mmg_spec spec, double eps, const char* method, double tol, uint64_t replicas, uint64_t seed,
                      char** json) {
  return guarded([&] {
    need(method, "method");
    mmg::GameSpec g = to_spec_loose(spec);
    mmg::Method m = mmg::parse_method(method, g);
    mmg::BisectOptions o;
    o.tol = tol;
    o.replicas = replicas > 0 ? replicas : o.replicas;
    o.seed = seed;
    mmg::WindowEstimate w = mmg::critical_window(g, eps, m, o);
    put_json(json, {{"spec", mmg::spec_name(g)},
                    {"n", g.rounds},
                    {"eps", eps},
                    {"method", mmg::method_name(m)},
                    {"p_eps", w.p_eps},
                    {"p_one_minus_eps", w.p_one_minus_eps},
                    {"width", w.width},
                    {"width_times_n", w.scaled}});
  });
}

mmg_status mmg_influence(mmg_spec spec, double p, uint64_t replicas, uint64_t seed, double dp, char** json) {
  return guarded([&] {
    mmg::GameSpec g = to_spec(spec);
    mmg::InfluenceReport r = mmg::total_influence_check(g, p, replicas, seed, dp);
    put_json(json, {{"spec", mmg::spec_name(g)},
                    {"n", g.rounds},
                    {"p", r.p},
                    {"dp", r.dp},
                    {"replicas", r.replicas},
                    {"seed", seed},
                    {"influences", r.per_outcome},
                    {"total", r.total},
                    {"total_stderr", r.total_stderr},
                    {"derivative", r.derivative},
                    {"derivative_stderr", r.derivative_stderr},
                    {"derivative_method", r.derivative_method},
                    {"bias_allowance", r.bias_allowance},
                    {"tolerance", r.tolerance},
                    {"ok", r.ok}});
  });
}

mmg_status mmg_sweep(const char* specs, const int32_t* ns, uint64_t n_len, const double* ps, uint64_t p_len,
                     const char* method, uint64_t replicas, uint64_t seed, char** csv) {
  return guarded([&] {
    need(specs, "spec list");
    need(method, "method");
    need(csv, "output pointer");
    if (n_len) need(ns, "n list");
    if (p_len) need(ps, "p grid");
    std::vector<mmg::GameSpec> list;
    std::stringstream ss(specs);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) list.push_back(mmg::parse_spec(item, 1));
    mmg::require(!list.empty(), "at least one family is required");
    std::vector<int> nv(ns, ns + n_len);
    std::vector<double> pv(ps, ps + p_len);
    *csv = dup(mmg::to_csv(mmg::sweep(list, nv, pv, method, replicas, seed)));
  });
}

mmg_status mmg_bounds_report(int32_t n_threshold, int32_t n_ab, int32_t n_order, uint64_t replicas, uint64_t seed,
                             char** json) {
  return guarded([&] {
    mmg::BoundsOptions o;
    o.n_threshold = n_threshold;
    o.n_ab = n_ab;
    o.n_order = n_order;
    o.replicas = replicas;
    o.seed = seed;
    put_json(json, mmg::bounds_report(o));
  });
}

mmg_status mmg_cycle_construct(const mmg_strategy* alice, mmg_cycle** out) {
  return guarded([&] {
    need(alice, "strategy");
    need(out, "output pointer");
    *out = new mmg_cycle{mmg::construct_from_strategy(alice->s.spec, alice->s)};
  });
}

mmg_status mmg_cycle_from_json(const char* json, mmg_cycle** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "output pointer");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      mmg::fail(mmg::ErrorCode::Parse, std::string("cycle JSON: ") + e.what());
    }
    *out = new mmg_cycle{mmg::cycle_from_json(j)};
  });
}

mmg_status mmg_cycle_to_json(const mmg_cycle* c, char** json) {
  return guarded([&] {
    need(c, "cycle");
    put_json(json, mmg::cycle_to_json(c->c));
  });
}

mmg_status mmg_cycle_validate(const mmg_cycle* c, int32_t* ok, int64_t* index, char** reason) {
  return guarded([&] {
    need(c, "cycle");
    need(ok, "ok pointer");
    mmg::CycleValidation v = mmg::validate(c->c.spec, c->c);
    *ok = v.ok ? 1 : 0;
    if (index) *index = v.index;
    if (reason) *reason = dup(v.reason);
  });
}

mmg_status mmg_cycle_census(const mmg_cycle* c, char** json) {
  return guarded([&] {
    need(c, "cycle");
    put_json(json, census_json(mmg::census_counts(c->c.spec, c->c)));
  });
}

mmg_status mmg_cycle_present(const mmg_cycle* c, const mmg_leaves* x, int32_t* out) {
  return guarded([&] {
    need(c, "cycle");
    need(x, "leaves");
    need(out, "output pointer");
    *out = mmg::present(c->c, x->x) ? 1 : 0;
  });
}

void mmg_cycle_free(mmg_cycle* c) { delete c; }

mmg_status mmg_toom_enumerate(mmg_spec spec, int32_t m_max, uint64_t node_budget, char** json) {
  return guarded([&] {
    mmg::GameSpec g = to_spec(spec);
    mmg::CycleCounts cc = mmg::enumerate_cycles(g, m_max, node_budget);
    nlohmann::json rows = nlohmann::json::array();
    for (size_t m = 0; m < cc.by_m.size(); ++m)
      rows.push_back({{"m", m}, {"cycles", cc.by_m[m]}, {"bound", cc.bound[m]}});
    put_json(json, {{"spec", mmg::spec_name(g)},
                    {"n", g.rounds},
                    {"ratio", mmg::peierls_ratio(g)},
                    {"by_m", rows},
                    {"within_bound", cc.within_bound},
                    {"nodes", cc.nodes}});
  });
}

mmg_status mmg_toom_false_positive(mmg_spec spec, uint64_t budget, uint64_t seed, char** json) {
  return guarded([&] {
    mmg::GameSpec g = to_spec(spec);
    mmg::FalsePositiveSearch r = mmg::find_false_positive(g, budget, seed);
    nlohmann::json out{{"spec", mmg::spec_name(g)},
                       {"n", g.rounds},
                       {"assignments", r.assignments},
                       {"exhaustive", r.exhaustive},
                       {"seed", seed},
                       {"found", bool(r.witness)}};
    if (r.witness) {
      out["x"] = r.witness->x.bits;
      out["L"] = mmg::eval_L(g, r.witness->x);
      out["cycle"] = mmg::cycle_to_json(r.witness->cycle);
    }
    put_json(json, out);
  });
}

mmg_status mmg_peierls_tail(mmg_spec spec, int32_t n, double p, double* out, int32_t* finite) {
  return guarded([&] {
    need(out, "output pointer");
    need(finite, "finite pointer");
    std::optional<double> t = mmg::peierls_tail(to_spec_loose(spec), n, p);
    *finite = t ? 1 : 0;
    *out = t ? *t : std::numeric_limits<double>::infinity();
  });
}

mmg_status mmg_ca_snapshot(const char* schedule, uint64_t width, uint64_t height, const int32_t* times,
                           uint64_t n_times, uint64_t seed, mmg_frames** out) {
  return guarded([&] {
    need(schedule, "schedule");
    need(out, "output pointer");
    if (n_times) need(times, "times");
    std::vector<int> tv(times, times + n_times);
    mmg::RuleSchedule s = mmg::parse_schedule(schedule, mmg::ValueKind::Real);
    auto frames = mmg::snapshot_series(s, width, height, tv, seed);
    *out = new mmg_frames{std::move(frames), tv};
  });
}

uint64_t mmg_frames_count(const mmg_frames* f) { return f ? f->frames.size() : 0; }

mmg_status mmg_frame_info(const mmg_frames* f, uint64_t index, int32_t* time, uint64_t* width, uint64_t* height) {
  return guarded([&] {
    need(f, "frames");
    mmg::require(index < f->frames.size(), "frame index out of range");
    const mmg::RealGrid& g = f->frames[index];
    if (time) *time = g.time;
    if (width) *width = g.width;
    if (height) *height = g.height;
  });
}

mmg_status mmg_frame_pgm(const mmg_frames* f, uint64_t index, char** bytes, uint64_t* len) {
  return guarded([&] {
    need(f, "frames");
    need(bytes, "output pointer");
    need(len, "length pointer");
    mmg::require(index < f->frames.size(), "frame index out of range");
    std::string b = mmg::frame_pgm(f->frames[index]);
    *bytes = dup(b);
    *len = b.size();
  });
}

mmg_status mmg_frame_csv(const mmg_frames* f, uint64_t index, char** csv) {
  return guarded([&] {
    need(f, "frames");
    need(csv, "output pointer");
    mmg::require(index < f->frames.size(), "frame index out of range");
    *csv = dup(mmg::grid_to_csv(f->frames[index]));
  });
}

void mmg_frames_free(mmg_frames* f) { delete f; }

mmg_status mmg_ca_verify(mmg_spec spec, double p, uint64_t trials, uint64_t seed, char** json) {
  return guarded([&] {
    mmg::GameSpec g = to_spec(spec);
    mmg::OriginCheck c = mmg::verify_origin_equivalence(g, p, trials, seed);
    nlohmann::json out{{"claim", "origin equals game value"},
                       {"instance", mmg::spec_name(g) + " n=" + std::to_string(g.rounds)},
                       {"status", c.mismatches == 0 ? "holds" : "violated"},
                       {"details", {{"p", p}, {"trials", c.trials}, {"mismatches", c.mismatches}, {"seed", seed}}}};
    if (c.mismatches) out["witness"] = {{"trial_seed", c.first_mismatch_seed}};
    put_json(json, out);
  });
}

mmg_status mmg_verify_sandwich(mmg_spec spec, char** json) {
  return guarded([&] { put_json(json, mmg::to_json(mmg::verify_strategy_sandwich(to_spec(spec)))); });
}

mmg_status mmg_verify_projection(int32_t n, uint64_t trials, uint64_t seed, char** json) {
  return guarded([&] { put_json(json, mmg::to_json(mmg::verify_projection(n, trials, seed))); });
}

mmg_status mmg_verify_compar(const mmg_spec* spec, int32_t vars, int32_t generators, double inclusion,
                             const int32_t* psi, uint64_t psi_len, int32_t targets, double p, int32_t zero_sets,
                             uint64_t seed, char** json) {
  return guarded([&] {
    mmg::TruthTable L;
    if (vars <= 0) {
      need(spec, "spec");
      L = mmg::game_truth_table(to_spec(*spec));
    } else {
      L = mmg::random_monotone(vars, generators, inclusion, seed);
    }
    std::vector<int> map;
    if (psi_len) {
      need(psi, "psi");
      map.assign(psi, psi + psi_len);
    } else {
      mmg::require(targets >= 1, "targets must be positive");
      mmg::CounterRng rng(mmg::stream_key(seed, mmg::Stream::Generic, 1));
      for (int i = 0; i < L.vars; ++i) map.push_back(int(rng.below(uint64_t(targets))));
    }
    put_json(json, mmg::to_json(mmg::verify_compar(L, map, targets, p, zero_sets != 0)));
  });
}

mmg_status mmg_verify_treeprop(int32_t n, uint64_t samples, uint64_t seed, char** json) {
  return guarded([&] { put_json(json, mmg::to_json(mmg::verify_tree_property(n, samples, seed))); });
}

mmg_status mmg_write_file_atomic(const char* path, const char* data, uint64_t len) {
  return guarded([&] {
    need(path, "path");
    if (len) need(data, "data");
    mmg::write_file_atomic(path, std::string(data ? data : "", len));
  });
}

mmg_status mmg_format_double(double v, char** out) {
  return guarded([&] {
    need(out, "output pointer");
    *out = dup(mmg::format_double(v));
  });
}

}  // extern "C"
