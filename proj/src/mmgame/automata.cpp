#include "mmgame/automata.hpp"

#include <algorithm>

#include "mmgame/error.hpp"
#include "mmgame/io.hpp"
#include "mmgame/minimax.hpp"
#include "mmgame/rng.hpp"

namespace mmg {

RuleSchedule schedule_for(Family f, ValueKind kind) {
  RuleSchedule s;
  s.even = a_kind(f) == SideKind::Tree ? EvenRule::A : EvenRule::a;
  s.odd = b_kind(f) == SideKind::Tree ? OddRule::B : OddRule::b;
  s.kind = kind;
  return s;
}

RuleSchedule parse_schedule(const std::string& name, ValueKind kind) {
  return schedule_for(parse_family(name), kind);
}

std::string schedule_name(const RuleSchedule& s) {
  return std::string(s.even == EvenRule::A ? "A" : "a") + (s.odd == OddRule::B ? "B" : "b");
}

void next_window(const RuleSchedule& s, int t, uint64_t& width, uint64_t& height) {
  require(t >= 1, "steps are numbered from t=1");
  if (t % 2 == 0)
    width = s.even == EvenRule::A ? width / 2 : (width ? width - 1 : 0);
  else
    height = s.odd == OddRule::B ? height / 2 : (height ? height - 1 : 0);
  if (width == 0 || height == 0)
    fail(ErrorCode::Domain, "window exhausted at t=" + std::to_string(t));
}

template <class T, class Op>
static Grid<T> step_impl(const Grid<T>& g, const RuleSchedule& s, int t, Op even_op, Op odd_op) {
  require(g.cells.size() == g.width * g.height, "grid cell count mismatch");
  Grid<T> o;
  o.width = g.width;
  o.height = g.height;
  next_window(s, t, o.width, o.height);
  o.time = t;
  o.cells.resize(size_t(o.width * o.height));
  if (t % 2 == 0) {
    const bool halve = s.even == EvenRule::A;
    for (uint64_t j = 0; j < o.height; ++j) {
      const T* in = g.cells.data() + j * g.width;
      T* out = o.cells.data() + j * o.width;
      if (halve)
        for (uint64_t i = 0; i < o.width; ++i) out[i] = even_op(in[2 * i], in[2 * i + 1]);
      else
        for (uint64_t i = 0; i < o.width; ++i) out[i] = even_op(in[i], in[i + 1]);
    }
  } else {
    const bool halve = s.odd == OddRule::B;
    for (uint64_t j = 0; j < o.height; ++j) {
      const T* r1 = g.cells.data() + (halve ? 2 * j : j) * g.width;
      const T* r2 = g.cells.data() + (halve ? 2 * j + 1 : j + 1) * g.width;
      T* out = o.cells.data() + j * o.width;
      for (uint64_t i = 0; i < o.width; ++i) out[i] = odd_op(r1[i], r2[i]);
    }
  }
  return o;
}

BitGrid step(const BitGrid& g, const RuleSchedule& s, int t) {
  using F = uint8_t (*)(uint8_t, uint8_t);
  F land = [](uint8_t x, uint8_t y) -> uint8_t { return x & y; };
  F lor = [](uint8_t x, uint8_t y) -> uint8_t { return x | y; };
  return step_impl<uint8_t, F>(g, s, t, land, lor);
}

RealGrid step(const RealGrid& g, const RuleSchedule& s, int t) {
  using F = double (*)(double, double);
  F mx = [](double x, double y) { return x > y ? x : y; };
  F mn = [](double x, double y) { return x < y ? x : y; };
  return step_impl<double, F>(g, s, t, mx, mn);
}

BitGrid threshold(const RealGrid& g, double p) {
  BitGrid o{g.width, g.height, g.time, std::vector<uint8_t>(g.cells.size())};
  for (size_t k = 0; k < g.cells.size(); ++k) o.cells[k] = g.cells[k] <= p;
  return o;
}

BitGrid initial_bits(const GameSpec& spec, double p, uint64_t seed) {
  validate_spec(spec);
  require(spec.alice_first(), "the automata correspond to games where Alice moves first");
  require(p >= 0 && p <= 1, "probability must lie in [0,1]");
  LevelShape top = level_shape(spec, spec.depth());
  check_budget(top.size(), "automaton window");
  BitGrid g{top.a_count, top.b_count, 0, std::vector<uint8_t>(size_t(top.size()))};
  for (uint64_t i = 0; i < g.width; ++i)
    for (uint64_t j = 0; j < g.height; ++j) g.at(i, j) = leaf_uniform(seed, i * g.height + j) <= p;
  return g;
}

RealGrid initial_uniforms(uint64_t width, uint64_t height, uint64_t seed) {
  require(width > 0 && height > 0, "window must be non-empty");
  check_budget(width * height * sizeof(double), "real-valued automaton window");
  RealGrid g{width, height, 0, std::vector<double>(size_t(width * height))};
  uint64_t key = stream_key(seed, Stream::Automaton, 1);
  for (uint64_t k = 0; k < g.cells.size(); ++k) g.cells[k] = to_unit_open(counter_word(key, k));
  return g;
}

int evolve_origin_from(const GameSpec& spec, BitGrid g) {
  RuleSchedule s = schedule_for(spec.family, ValueKind::Bit);
  for (int t = 1; t <= spec.depth(); ++t) g = step(g, s, t);
  return g.at(0, 0);
}

int evolve_origin(const GameSpec& spec, double p, uint64_t seed) {
  return evolve_origin_from(spec, initial_bits(spec, p, seed));
}

uint64_t trial_seed(uint64_t seed, uint64_t t) { return mix64(seed + (t + 1) * kGolden); }

OriginCheck verify_origin_equivalence(const GameSpec& spec, double p, uint64_t trials, uint64_t seed) {
  OriginCheck c;
  c.trials = trials;
  for (uint64_t t = 0; t < trials; ++t) {
    uint64_t s = trial_seed(seed, t);
    int grid = evolve_origin(spec, p, s);
    int game = eval_L(spec, sample_leaves(spec, p, s));
    if (grid != game && c.mismatches++ == 0) c.first_mismatch_seed = s;
  }
  return c;
}

std::vector<RealGrid> snapshot_series(const RuleSchedule& schedule, uint64_t width, uint64_t height,
                                      const std::vector<int>& times, uint64_t seed) {
  require(!times.empty(), "at least one snapshot time is needed");
  for (size_t k = 0; k < times.size(); ++k) {
    require(times[k] >= 0, "snapshot times must be nonnegative");
    if (k) require(times[k] > times[k - 1], "snapshot times must be increasing");
  }
  uint64_t w = width, h = height;
  for (int t = 1; t <= times.back(); ++t) next_window(schedule, t, w, h);
  RuleSchedule real = schedule;
  real.kind = ValueKind::Real;
  RealGrid g = initial_uniforms(width, height, seed);
  std::vector<RealGrid> out;
  size_t next = 0;
  for (int t = 0; next < times.size(); ++t) {
    if (t > 0) g = step(g, real, t);
    if (t == times[next]) {
      out.push_back(g);
      ++next;
    }
  }
  return out;
}

std::string grid_to_csv(const RealGrid& g) {
  CsvTable t{{"t", "i", "j", "value"}, {}};
  for (uint64_t j = 0; j < g.height; ++j)
    for (uint64_t i = 0; i < g.width; ++i)
      t.rows.push_back({std::to_string(g.time), std::to_string(i), std::to_string(j), format_double(g.at(i, j))});
  return to_csv(t);
}

std::string frame_pgm(const RealGrid& g) { return pgm_bytes(g.width, g.height, g.cells); }

}  // namespace mmg
