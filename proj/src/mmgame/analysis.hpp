#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmgame/io.hpp"
#include "mmgame/minimax.hpp"
#include "mmgame/stats.hpp"
#include "mmgame/topology.hpp"

namespace mmg {

enum class Method { ExactColumn, Recursion, BruteForce, MonteCarlo, PayoffCdf };

std::string method_name(Method m);
// Also accepts "exact", resolved per family by `exact_method_for`.
Method parse_method(const std::string& name, const GameSpec& spec);
Method exact_method_for(const GameSpec& spec);

struct Estimate {
  double value = 0;
  double ci_low = 0;
  double ci_high = 0;
  uint64_t replicas = 0;  // 0 for exact methods
  uint64_t seed = 0;
};

// P_n(p) by the chosen method.
Estimate evaluate_win_prob(const GameSpec& spec, double p, Method method, uint64_t replicas, uint64_t seed);

struct ThresholdEstimate {
  GameSpec spec;
  double level = 0.5;
  double p_low = 0;
  double p_high = 1;
  double value_low = 0;   // evaluator at p_low
  double value_high = 1;  // evaluator at p_high
  Method method = Method::ExactColumn;
  double tol = 1e-4;
  int evaluations = 0;
  uint64_t max_replicas = 0;
  double midpoint() const { return 0.5 * (p_low + p_high); }
};

struct BisectOptions {
  double tol = 1e-4;
  uint64_t replicas = 4096;       // starting replica count for mc / payoff-cdf sample size
  uint64_t max_replicas = 1 << 22;
  uint64_t seed = 0;
};

ThresholdEstimate threshold_bisect(const GameSpec& spec, double level, Method method, const BisectOptions& opt);

struct InfluenceEstimate {
  Interval influence;
  uint64_t replicas = 0;
};
InfluenceEstimate pivotal_influence(const GameSpec& spec, double p, uint64_t outcome, uint64_t replicas, uint64_t seed);
// Exact influences by enumeration (outcome_count <= 25).
std::vector<double> exact_influences(const GameSpec& spec, double p);

struct InfluenceReport {
  double p = 0;
  double dp = 0;
  std::vector<double> per_outcome;
  double total = 0;
  double total_stderr = 0;
  double derivative = 0;
  double derivative_stderr = 0;
  double bias_allowance = 0;
  std::string derivative_method;
  double tolerance = 0;
  bool ok = false;
  uint64_t replicas = 0;
};
InfluenceReport total_influence_check(const GameSpec& spec, double p, uint64_t replicas, uint64_t seed, double dp = 0.01);

struct WindowEstimate {
  double p_eps = 0;
  double p_one_minus_eps = 0;
  double width = 0;
  double scaled = 0;  // width * n
};
WindowEstimate critical_window(const GameSpec& spec, double eps, Method method, const BisectOptions& opt);

struct BoundsOptions {
  int n_threshold = 20;
  int n_ab = 12;
  int n_order = 2;
  uint64_t replicas = 100000;
  uint64_t seed = 1;
};
nlohmann::json bounds_report(const BoundsOptions& opt);

uint64_t cell_seed(uint64_t master, Family f, bool alice_first, int n, size_t p_index);

CsvTable sweep(const std::vector<GameSpec>& specs, const std::vector<int>& n_list, const std::vector<double>& p_grid,
               const std::string& method, uint64_t replicas, uint64_t seed);

}  // namespace mmg
