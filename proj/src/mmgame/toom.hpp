#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmgame/minimax.hpp"
#include "mmgame/topology.hpp"

namespace mmg {

// su/sd move along Alice's edges; ru/ld along Bob's move-1 edges; lu/rd along
// Bob's move-2 edges. The first letter of each pair is the upward direction.
enum class StepType { su = 0, sd = 1, lu = 2, ld = 3, ru = 4, rd = 5 };

std::string step_name(StepType t);
StepType parse_step(const std::string& s);
inline bool is_up(StepType t) { return t == StepType::su || t == StepType::lu || t == StepType::ru; }

struct ToomCycle {
  GameSpec spec;
  std::vector<Vertex> vertices;
  std::vector<StepType> steps;
  size_t length() const { return steps.size(); }
};

// Visit classes of walk indices: up-up, down-up, down-down, up-down.
enum class VisitTag { Up = 0, Min = 1, Down = 2, Turn = 3 };

StepType classify_step(const GameSpec& spec, const Vertex& v, const Vertex& w);

struct CycleValidation {
  bool ok = true;
  long index = -1;  // walk index at which the first violation was detected
  std::string reason;
};
CycleValidation validate(const GameSpec& spec, const ToomCycle& cycle);
std::vector<VisitTag> visit_tags(const ToomCycle& cycle);

struct CycleCensus {
  std::array<uint64_t, 6> counts{};  // indexed by StepType
  uint64_t m = 0;
  uint64_t outcomes = 0;  // distinct outcomes visited
  uint64_t length = 0;
  bool six_equal = false;      // all six counts equal, l = 6m, m+1 outcomes
  bool bob_start_law = false;  // su = sd = 2m, other types m, l = 8m, m+1 outcomes
  uint64_t count(StepType t) const { return counts[size_t(t)]; }
};
// Throws Invariant when the law matching the spec's first mover fails.
CycleCensus census(const GameSpec& spec, const ToomCycle& cycle);
CycleCensus census_counts(const GameSpec& spec, const ToomCycle& cycle);

bool present(const ToomCycle& cycle, const LeafAssignment& x);

// Removes the walk segment after the first visit of a repeated vertex at
// `depth`, earliest repeat first, until no vertex at that depth repeats.
std::vector<Vertex> loop_erase(const GameSpec& spec, const std::vector<Vertex>& walk, int depth);
ToomCycle loop_erase(const ToomCycle& cycle);

struct ConstructionLog {
  uint64_t right_up_right_down = 0;  // ru immediately followed by rd
};
// Requires a spec whose Bob side is the lattice.
ToomCycle construct_from_strategy(const GameSpec& spec, const Strategy& alice, ConstructionLog* log = nullptr);

// Depth-first search over Toom cycles of length at most max_len. `allowed`
// filters outcome ordinals; `visit` returns false to stop. Returns the
// number of search nodes expanded.
uint64_t search_cycles(const GameSpec& spec, size_t max_len, const std::function<bool(uint64_t)>& allowed,
                       const std::function<bool(const ToomCycle&)>& visit, uint64_t node_budget);

struct CycleCounts {
  std::vector<uint64_t> by_m;  // by_m[m] = number of Toom cycles with census m
  std::vector<double> bound;   // 2^{3m}, 2^{4m} or 2^{6m}
  bool within_bound = true;
  uint64_t nodes = 0;
};
CycleCounts enumerate_cycles(const GameSpec& spec, int m_max, uint64_t node_budget = uint64_t(1) << 32);
// Growth ratio r of the cycle-count bound r^m for the spec (8, 16 or 64).
int peierls_ratio(const GameSpec& spec);

// Sum over m >= n of r^m (1-p)^(m+1); empty when r(1-p) >= 1.
std::optional<double> peierls_tail(const GameSpec& spec, int n, double p);

struct FalsePositive {
  LeafAssignment x;
  ToomCycle cycle;
};
struct FalsePositiveSearch {
  std::optional<FalsePositive> witness;
  uint64_t assignments = 0;
  bool exhaustive = false;
};
FalsePositiveSearch find_false_positive(const GameSpec& spec, uint64_t budget, uint64_t seed);

nlohmann::json cycle_to_json(const ToomCycle& c);
ToomCycle cycle_from_json(const nlohmann::json& j);

}  // namespace mmg
