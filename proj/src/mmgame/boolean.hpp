#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmgame/minimax.hpp"
#include "mmgame/rng.hpp"
#include "mmgame/topology.hpp"

namespace mmg {

// Boolean function on variables 0..vars-1; bit i of an input index is variable i.
struct TruthTable {
  int vars = 0;
  std::vector<uint8_t> value;
  bool operator()(uint64_t x) const { return value[size_t(x)] != 0; }
  uint64_t full() const { return vars == 64 ? ~uint64_t(0) : (uint64_t(1) << vars) - 1; }
};

inline constexpr int kMaxTableVars = 25;

TruthTable make_truth_table(int vars, const std::function<bool(uint64_t)>& f);
// L of a game spec over its outcomes in level order (outcome_count <= 25).
TruthTable game_truth_table(const GameSpec& spec);
bool is_monotone(const TruthTable& L);
// Random monotone function: the up-closure of `generators` random subsets.
TruthTable random_monotone(int vars, int generators, double inclusion, uint64_t seed);

// Subsets of the variables as bitmasks, sorted ascending.
using SetFamily = std::vector<uint64_t>;

SetFamily minimal_one_sets(const TruthTable& L);
SetFamily minimal_zero_sets(const TruthTable& L);
bool is_one_set(const TruthTable& L, uint64_t A);
bool is_zero_set(const TruthTable& L, uint64_t Z);

struct ClaimReport {
  std::string claim;
  std::string instance;
  std::string status;  // "holds", "violated" or "inapplicable"
  nlohmann::json witness;
  nlohmann::json details;
  bool holds() const { return status == "holds"; }
};
nlohmann::json to_json(const ClaimReport& r);

// Calls `visit` with the sorted outcome ordinals of Z(sigma) (Alice) or
// A(sigma) (Bob) for every strategy, choices only on reachable vertices.
// Throws Budget once more than `limit` strategies would be visited.
void for_each_strategy_outcome_set(const GameSpec& spec, Player player, uint64_t limit,
                                   const std::function<void(const std::vector<uint64_t>&)>& visit);
// Outcome set of a uniformly random reachable-vertex strategy.
std::vector<uint64_t> random_strategy_outcome_set(const GameSpec& spec, Player player, CounterRng& rng);

ClaimReport verify_strategy_sandwich(const GameSpec& spec);

Side project_ell(const Side& word);
Vertex ell1(const Vertex& v);
Vertex ell2(const Vertex& v);
ClaimReport verify_projection(int n, uint64_t trials, uint64_t seed);

enum class Profile { Minus, Plus, First, Second, Or, And };
std::string profile_name(Profile p);
Profile two_point_profile(const TruthTable& L, uint64_t x, int i1, int i2);

struct ContractionCheck {
  double lhs = 0;  // P[L(X)=1] - P[L(Y o psi)=1]
  double rhs = 0;  // p(1-p)(P[profile = or] - P[profile = and])
  bool ok = false;
};
ContractionCheck contraction_identity_check(const TruthTable& L, int i1, int i2, double p);

// psi maps variable i of L to target psi[i] in 0..targets-1.
ClaimReport verify_compar(const TruthTable& L, const std::vector<int>& psi, int targets, double p, bool zero_sets);

ClaimReport verify_tree_property(int n, uint64_t samples, uint64_t seed);

}  // namespace mmg
