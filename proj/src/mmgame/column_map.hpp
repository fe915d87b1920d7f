#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mmg {

// Exact law of a finite bit column y(0..m-1); index bit j is y(j).
struct ColumnLaw {
  int m = 1;
  std::vector<double> prob;
};

inline constexpr int kMaxColumnLength = 24;
inline constexpr int kMaxExactRounds = 22;

ColumnLaw product_law(int m, double p);
ColumnLaw delta_law(int m, uint64_t y);
ColumnLaw make_law(int m, std::vector<double> prob);
double density(const ColumnLaw& law);
double marginal(const ColumnLaw& law, int j);
double total_mass(const ColumnLaw& law);

// g(x) = sum of P(y) over y containing x, in place; and its inverse.
void upset_transform(std::vector<double>& v);
void upset_inverse(std::vector<double>& v);

ColumnLaw apply_Fb(const ColumnLaw& law);
ColumnLaw apply_FA(const ColumnLaw& law);
// Direct double sum over pairs; O(4^m) reference for apply_FA.
ColumnLaw apply_FA_direct(const ColumnLaw& law);

using LawObserver = std::function<void(const ColumnLaw&)>;

// P^Ab_n(p) = <F^n(pi_p)> on a column of length n+1.
double exact_win_prob_Ab(int n, double p, const LawObserver& observe = {});
// P^aB_n(p) = 1 - <Fhat^n(pi_{1-p})>.
double exact_win_prob_aB(int n, double p, const LawObserver& observe = {});

struct DensityReport {
  bool ok = true;
  double d = 0;        // <mu>
  double d_FA = 0;     // <F_A mu>, should equal d^2
  double d_Fb = 0;     // <F_b mu> <= 2 d   (m >= 2)
  double d_F = 0;      // <F mu>   <= 4 d^2 (m >= 2)
  double d_Fhat = 0;   // <Fhat mu> <= 2 d^2 (m >= 2)
  double stationarity_defect = 0;  // max_j |P[y(j)=1] - d|
  std::string violation;           // empty when ok
};

DensityReport check_density_bounds(const ColumnLaw& law, double tol = 1e-9);

std::string law_to_csv(const ColumnLaw& law);

}  // namespace mmg
