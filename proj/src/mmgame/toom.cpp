#include "mmgame/toom.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "mmgame/boolean.hpp"
#include "mmgame/error.hpp"
#include "mmgame/rng.hpp"

namespace mmg {

namespace {
constexpr const char* kStepNames[6] = {"su", "sd", "lu", "ld", "ru", "rd"};

bool pair_allowed(StepType prev, StepType next, bool outcome) {
  using S = StepType;
  if (outcome) {
    switch (prev) {
      case S::su: return next == S::sd;
      case S::ru:
      case S::lu: return next == S::rd || next == S::ld;
      default: return false;
    }
  }
  switch (prev) {
    case S::su: return next == S::ru;
    case S::ru:
    case S::lu: return next == S::su;
    case S::sd: return next == S::rd || next == S::ld;
    case S::rd: return next == S::sd;
    case S::ld: return next == S::lu;
  }
  return false;
}

VisitTag tag_between(bool up_in, bool up_out) {
  if (up_in) return up_out ? VisitTag::Up : VisitTag::Turn;
  return up_out ? VisitTag::Min : VisitTag::Down;
}

void require_lattice_bob(const GameSpec& spec, const char* what) {
  validate_spec(spec);
  if (b_kind(spec.family) != SideKind::Lattice)
    fail(ErrorCode::Domain, std::string(what) + " needs Bob's decision graph to be the lattice (Ab, ab, Ab', ab'), got " +
                                spec_name(spec));
}
}  // namespace

std::string step_name(StepType t) { return kStepNames[int(t)]; }

StepType parse_step(const std::string& s) {
  for (int i = 0; i < 6; ++i)
    if (s == kStepNames[i]) return StepType(i);
  fail(ErrorCode::Parse, "unknown step type '" + s + "'");
}

StepType classify_step(const GameSpec& spec, const Vertex& v, const Vertex& w) {
  check_vertex(spec, v);
  check_vertex(spec, w);
  bool up = w.depth() == v.depth() + 1;
  bool down = v.depth() == w.depth() + 1;
  if (up || down) {
    const Vertex& lo = up ? v : w;
    const Vertex& hi = up ? w : v;
    if (!is_outcome(spec, lo)) {
      auto ch = children(spec, lo);
      bool a = a_moves_at(spec, int(lo.depth()));
      if (hi == ch[0]) return a ? (up ? StepType::su : StepType::sd) : (up ? StepType::ru : StepType::ld);
      if (hi == ch[1]) return a ? (up ? StepType::su : StepType::sd) : (up ? StepType::lu : StepType::rd);
    }
  }
  fail(ErrorCode::InvalidArgument,
       "vertices " + vertex_to_string(spec, v) + " and " + vertex_to_string(spec, w) + " are not adjacent");
}

CycleValidation validate(const GameSpec& spec, const ToomCycle& c) {
  auto bad = [](long k, std::string r) { return CycleValidation{false, k, std::move(r)}; };
  if (!(c.spec == spec)) return bad(-1, "cycle belongs to a different game spec");
  if (c.vertices.empty()) return bad(0, "empty walk");
  if (c.steps.size() + 1 != c.vertices.size()) return bad(-1, "a walk of l steps needs l+1 vertices");
  for (size_t k = 0; k < c.vertices.size(); ++k) {
    try {
      check_vertex(spec, c.vertices[k]);
    } catch (const Error& e) {
      return bad(long(k), std::string("not a vertex of the game-graph: ") + e.what());
    }
  }
  const size_t l = c.steps.size();
  const Vertex r = root(spec);
  if (!(c.vertices[0] == r)) return bad(0, "walk must start at the root");
  if (l == 0) return spec.rounds == 0 ? CycleValidation{} : bad(0, "a Toom cycle has length at least 2");
  if (l < 2) return bad(long(l), "a Toom cycle has length at least 2");
  if (!(c.vertices[l] == r)) return bad(long(l), "walk must end at the root");
  if (c.steps[0] != StepType::su && c.steps[0] != StepType::ru) return bad(1, "first step must be su or ru");
  std::unordered_map<uint64_t, VisitTag> last_tag;
  std::unordered_set<uint64_t> outcomes;
  for (size_t k = 0; k <= l; ++k) {
    if (k >= 1) {
      StepType t;
      try {
        t = classify_step(spec, c.vertices[k - 1], c.vertices[k]);
      } catch (const Error&) {
        return bad(long(k), "step " + std::to_string(k) + " joins non-adjacent vertices");
      }
      if (t != c.steps[k - 1])
        return bad(long(k), "step " + std::to_string(k) + " is recorded as " + step_name(c.steps[k - 1]) +
                                " but is " + step_name(t));
    }
    if (k == l && c.steps[l - 1] != StepType::sd && c.steps[l - 1] != StepType::rd)
      return bad(long(l), "last step must be sd or rd");
    const Vertex& v = c.vertices[k];
    const bool outc = is_outcome(spec, v);
    if (k > 0 && k < l && !pair_allowed(c.steps[k - 1], c.steps[k], outc))
      return bad(long(k), "step pair " + step_name(c.steps[k - 1]) + "->" + step_name(c.steps[k]) + " not allowed at " +
                              (outc ? "an outcome" : "an internal vertex"));
    VisitTag tag = k == 0 ? VisitTag::Up : k == l ? VisitTag::Down : tag_between(is_up(c.steps[k - 1]), is_up(c.steps[k]));
    uint64_t key = vertex_key(spec, v);
    if (outc) {
      if (!outcomes.insert(key).second) return bad(long(k), "outcome " + vertex_to_string(spec, v) + " visited twice");
      continue;
    }
    auto it = last_tag.find(key);
    if (it != last_tag.end() && int(it->second) >= int(tag))
      return bad(long(k), "internal vertex " + vertex_to_string(spec, v) + " revisited out of order");
    last_tag[key] = tag;
  }
  return CycleValidation{};
}

std::vector<VisitTag> visit_tags(const ToomCycle& c) {
  const size_t l = c.steps.size();
  std::vector<VisitTag> t(l + 1, VisitTag::Up);
  for (size_t k = 1; k <= l; ++k)
    t[k] = k == l ? VisitTag::Down : tag_between(is_up(c.steps[k - 1]), is_up(c.steps[k]));
  return t;
}

CycleCensus census_counts(const GameSpec& spec, const ToomCycle& c) {
  CycleCensus s;
  for (StepType t : c.steps) s.counts[size_t(t)]++;
  std::unordered_set<uint64_t> outs;
  for (const Vertex& v : c.vertices)
    if (int(v.depth()) == spec.depth()) outs.insert(vertex_key(spec, v));
  s.outcomes = outs.size();
  s.length = c.steps.size();
  const uint64_t su = s.count(StepType::su), ru = s.count(StepType::ru);
  s.m = spec.alice_first() ? su : ru;
  bool eq = true;
  for (uint64_t k : s.counts) eq = eq && k == su;
  s.six_equal = eq && s.length == 6 * su && s.outcomes == su + 1;
  bool bob = s.count(StepType::sd) == 2 * ru && su == 2 * ru;
  for (StepType t : {StepType::lu, StepType::ld, StepType::rd}) bob = bob && s.count(t) == ru;
  s.bob_start_law = bob && s.length == 8 * ru && s.outcomes == ru + 1;
  return s;
}

CycleCensus census(const GameSpec& spec, const ToomCycle& c) {
  CycleCensus s = census_counts(spec, c);
  bool ok = spec.alice_first() ? s.six_equal : s.bob_start_law;
  if (!ok) {
    std::string counts;
    for (int i = 0; i < 6; ++i) counts += std::string(i ? " " : "") + kStepNames[i] + "=" + std::to_string(s.counts[size_t(i)]);
    fail(ErrorCode::Invariant, "census law fails for " + spec_name(spec) + ": " + counts + ", l=" +
                                   std::to_string(s.length) + ", outcomes=" + std::to_string(s.outcomes));
  }
  return s;
}

bool present(const ToomCycle& c, const LeafAssignment& x) {
  require(x.spec == c.spec, "leaf assignment belongs to a different game spec");
  for (const Vertex& v : c.vertices)
    if (int(v.depth()) == c.spec.depth() && x.bits[size_t(level_index(c.spec, v))]) return false;
  return true;
}

std::vector<Vertex> loop_erase(const GameSpec& spec, const std::vector<Vertex>& walk, int depth) {
  std::vector<Vertex> out;
  out.reserve(walk.size());
  std::unordered_map<uint64_t, size_t> pos;
  for (const Vertex& v : walk) {
    if (int(v.depth()) == depth) {
      uint64_t key = vertex_key(spec, v);
      auto it = pos.find(key);
      if (it != pos.end()) {
        size_t keep = it->second + 1;
        for (size_t k = keep; k < out.size(); ++k)
          if (int(out[k].depth()) == depth) pos.erase(vertex_key(spec, out[k]));
        out.resize(keep);
        continue;
      }
      pos.emplace(key, out.size());
    }
    out.push_back(v);
  }
  return out;
}

static ToomCycle with_steps(const GameSpec& spec, std::vector<Vertex> walk) {
  ToomCycle c{spec, std::move(walk), {}};
  c.steps.reserve(c.vertices.size());
  for (size_t k = 1; k < c.vertices.size(); ++k) c.steps.push_back(classify_step(spec, c.vertices[k - 1], c.vertices[k]));
  return c;
}

ToomCycle loop_erase(const ToomCycle& c) { return with_steps(c.spec, loop_erase(c.spec, c.vertices, c.spec.depth())); }

ToomCycle construct_from_strategy(const GameSpec& spec, const Strategy& alice, ConstructionLog* log) {
  require_lattice_bob(spec, "Toom-cycle construction");
  require(alice.player == Player::Alice, "construction needs a strategy for Alice");
  require(alice.spec == spec, "strategy belongs to a different game spec");
  std::vector<Vertex> walk{root(spec)}, next;
  for (int d = 0; d < spec.depth(); ++d) {
    const bool alice_turn = turn(spec, d) == Player::Alice;
    next.clear();
    next.reserve(walk.size() * 3);
    for (const Vertex& v : walk) {
      if (int(v.depth()) != d) {
        next.push_back(v);
        continue;
      }
      auto ch = children(spec, v);
      if (alice_turn) {
        next.insert(next.end(), {v, ch[size_t(alice.move_at(v) - 1)], v});
      } else {
        next.insert(next.end(), {v, ch[0], v, ch[1], v});
      }
    }
    walk = loop_erase(spec, next, d + 1);
  }
  ToomCycle c = with_steps(spec, std::move(walk));
  if (log)
    for (size_t k = 1; k < c.steps.size(); ++k)
      if (c.steps[k - 1] == StepType::ru && c.steps[k] == StepType::rd) log->right_up_right_down++;
  return c;
}

namespace {

class CycleSearch {
 public:
  CycleSearch(const GameSpec& spec, size_t max_len, const std::function<bool(uint64_t)>& allowed,
              const std::function<bool(const ToomCycle&)>& visit, uint64_t budget)
      : spec_(spec), D_(spec.depth()), max_len_(max_len), allowed_(allowed), visit_(visit), budget_(budget) {}

  uint64_t run() {
    Vertex r = root(spec_);
    walk_.push_back(r);
    if (D_ == 0) {
      if (allowed_(0)) visit_(ToomCycle{spec_, walk_, {}});
      return 0;
    }
    tags_[vertex_key(spec_, r)] = VisitTag::Up;
    rec();
    return nodes_;
  }

 private:
  void targets(const Vertex& v, StepType t, std::vector<Vertex>& out) const {
    out.clear();
    const int d = int(v.depth());
    if (is_up(t)) {
      if (d >= D_) return;
      bool a = a_moves_at(spec_, d);
      if ((t == StepType::su) != a) return;
      auto ch = children(spec_, v);
      if (t == StepType::su) {
        out.push_back(ch[0]);
        out.push_back(ch[1]);
      } else {
        out.push_back(t == StepType::ru ? ch[0] : ch[1]);
      }
      return;
    }
    if (d == 0) return;
    bool a = a_moves_at(spec_, d - 1);
    if ((t == StepType::sd) != a) return;
    for (const Vertex& p : parents(spec_, v)) {
      if (t == StepType::sd) {
        out.push_back(p);
        continue;
      }
      auto ch = children(spec_, p);
      if ((t == StepType::ld && ch[0] == v) || (t == StepType::rd && ch[1] == v)) out.push_back(p);
    }
  }

  void rec() {
    if (stop_) return;
    const Vertex v = walk_.back();
    const size_t l = steps_.size();
    const Vertex r = root(spec_);
    if (l > 0 && v == r && (steps_.back() == StepType::sd || steps_.back() == StepType::rd)) {
      if (!visit_(ToomCycle{spec_, walk_, steps_})) stop_ = true;
      return;
    }
    const bool outc = int(v.depth()) == D_;
    std::vector<StepType> options;
    if (l == 0) {
      options = {StepType::su, StepType::ru};
    } else {
      for (int i = 0; i < 6; ++i)
        if (pair_allowed(steps_.back(), StepType(i), outc)) options.push_back(StepType(i));
    }
    std::vector<Vertex> tg;
    const uint64_t vkey = vertex_key(spec_, v);
    for (StepType t : options) {
      targets(v, t, tg);
      if (tg.empty()) continue;
      bool restore = false;
      VisitTag saved{};
      bool had = false;
      if (l > 0 && !outc) {
        VisitTag tag = tag_between(is_up(steps_.back()), is_up(t));
        auto it = tags_.find(vkey);
        had = it != tags_.end();
        if (had && int(it->second) >= int(tag)) continue;
        if (had) saved = it->second;
        tags_[vkey] = tag;
        restore = true;
      }
      for (const Vertex& w : tg) {
        if (stop_) break;
        if (l + 1 + w.depth() > max_len_) continue;
        bool w_out = int(w.depth()) == D_;
        uint64_t wkey = vertex_key(spec_, w);
        if (w_out) {
          if (used_.count(wkey) || !allowed_(level_index(spec_, w))) continue;
          used_.insert(wkey);
        }
        if (++nodes_ > budget_)
          fail(ErrorCode::Budget, "Toom-cycle search exceeds the node budget of " + std::to_string(budget_));
        walk_.push_back(w);
        steps_.push_back(t);
        rec();
        walk_.pop_back();
        steps_.pop_back();
        if (w_out) used_.erase(wkey);
      }
      if (restore) {
        if (had)
          tags_[vkey] = saved;
        else
          tags_.erase(vkey);
      }
      if (stop_) return;
    }
  }

  const GameSpec& spec_;
  int D_;
  size_t max_len_;
  const std::function<bool(uint64_t)>& allowed_;
  const std::function<bool(const ToomCycle&)>& visit_;
  uint64_t budget_;
  uint64_t nodes_ = 0;
  bool stop_ = false;
  std::vector<Vertex> walk_;
  std::vector<StepType> steps_;
  std::unordered_map<uint64_t, VisitTag> tags_;
  std::unordered_set<uint64_t> used_;
};

}  // namespace

uint64_t search_cycles(const GameSpec& spec, size_t max_len, const std::function<bool(uint64_t)>& allowed,
                       const std::function<bool(const ToomCycle&)>& visit, uint64_t node_budget) {
  require_lattice_bob(spec, "Toom-cycle search");
  CycleSearch s(spec, max_len, allowed, visit, node_budget);
  return s.run();
}

int peierls_ratio(const GameSpec& spec) {
  require_lattice_bob(spec, "Peierls counting");
  bool tree = a_kind(spec.family) == SideKind::Tree;
  if (spec.alice_first()) return tree ? 8 : 16;
  return tree ? 16 : 64;
}

CycleCounts enumerate_cycles(const GameSpec& spec, int m_max, uint64_t node_budget) {
  require(m_max >= 0, "m_max must be nonnegative");
  const int r = peierls_ratio(spec);
  const size_t per_m = spec.alice_first() ? 6 : 8;
  CycleCounts out;
  out.by_m.assign(size_t(m_max) + 1, 0);
  out.nodes = search_cycles(
      spec, per_m * size_t(m_max), [](uint64_t) { return true; },
      [&](const ToomCycle& c) {
        CycleCensus s = census(spec, c);
        if (s.m <= uint64_t(m_max)) out.by_m[size_t(s.m)]++;
        return true;
      },
      node_budget);
  for (int m = 0; m <= m_max; ++m) {
    out.bound.push_back(std::pow(double(r), m));
    if (double(out.by_m[size_t(m)]) > out.bound.back()) out.within_bound = false;
  }
  return out;
}

std::optional<double> peierls_tail(const GameSpec& spec, int n, double p) {
  require(n >= 0, "n must be nonnegative");
  require(p >= 0 && p <= 1, "probability must lie in [0,1]");
  const double q = 1 - p;
  const double rq = peierls_ratio(spec) * q;
  if (rq >= 1) return std::nullopt;
  return q * std::pow(rq, n) / (1 - rq);
}

FalsePositiveSearch find_false_positive(const GameSpec& spec, uint64_t budget, uint64_t seed) {
  require_lattice_bob(spec, "false-positive search");
  const uint64_t N = outcome_count(spec);
  if (N > 25) fail(ErrorCode::Budget, "false-positive search is limited to 25 outcomes, spec has " + std::to_string(N));
  FalsePositiveSearch res;
  const size_t per_m = spec.alice_first() ? 6 : 8;
  auto try_x = [&](const LeafAssignment& x) {
    ++res.assignments;
    uint64_t zeros = uint64_t(std::count(x.bits.begin(), x.bits.end(), uint8_t(0)));
    if (zeros == 0) return false;
    std::optional<ToomCycle> found;
    search_cycles(
        spec, per_m * size_t(zeros), [&](uint64_t o) { return x.bits[size_t(o)] == 0; },
        [&](const ToomCycle& c) {
          found = c;
          return false;
        },
        uint64_t(1) << 32);
    if (!found) return false;
    res.witness = FalsePositive{x, *found};
    return true;
  };
  if (N < 63 && (uint64_t(1) << N) <= budget) {
    res.exhaustive = true;
    TruthTable L = game_truth_table(spec);
    LeafAssignment x{spec, std::vector<uint8_t>(size_t(N))};
    for (uint64_t m = 0; m < L.value.size(); ++m) {
      if (!L(m)) {
        ++res.assignments;
        continue;
      }
      for (uint64_t k = 0; k < N; ++k) x.bits[k] = uint8_t((m >> k) & 1);
      if (try_x(x)) return res;
    }
    return res;
  }
  CounterRng rng(seed, Stream::Search, 0);
  LeafAssignment x{spec, std::vector<uint8_t>(size_t(N))};
  for (uint64_t t = 0; t < budget; ++t) {
    uint64_t w = rng();
    for (uint64_t k = 0; k < N; ++k) x.bits[k] = uint8_t((w >> k) & 1);
    if (!eval_L(spec, x)) {
      ++res.assignments;
      continue;
    }
    if (try_x(x)) return res;
  }
  return res;
}

nlohmann::json cycle_to_json(const ToomCycle& c) {
  nlohmann::json v = nlohmann::json::array(), s = nlohmann::json::array();
  for (const Vertex& x : c.vertices) v.push_back(vertex_to_string(c.spec, x));
  for (StepType t : c.steps) s.push_back(step_name(t));
  return nlohmann::json{{"spec", spec_name(c.spec)}, {"n", c.spec.rounds}, {"vertices", v}, {"steps", s}};
}

ToomCycle cycle_from_json(const nlohmann::json& j) {
  try {
    ToomCycle c;
    c.spec = parse_spec(j.at("spec").get<std::string>(), j.at("n").get<int>());
    for (const auto& v : j.at("vertices")) c.vertices.push_back(vertex_from_string(c.spec, v.get<std::string>()));
    for (const auto& s : j.at("steps")) c.steps.push_back(parse_step(s.get<std::string>()));
    return c;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("malformed cycle JSON: ") + e.what());
  }
}

}  // namespace mmg
