#include "mmgame/column_map.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "mmgame/error.hpp"
#include "mmgame/io.hpp"
#include "mmgame/minimax.hpp"

namespace mmg {

static void check_length(int m) {
  if (m < 1 || m > kMaxColumnLength)
    fail(ErrorCode::Budget, "column length " + std::to_string(m) + " outside the supported range [1, " +
                                std::to_string(kMaxColumnLength) + "]");
  check_budget((uint64_t(1) << m) * sizeof(double), "column law of length " + std::to_string(m));
}

ColumnLaw product_law(int m, double p) {
  check_length(m);
  require(p >= 0 && p <= 1, "probability must lie in [0,1]");
  ColumnLaw law{m, std::vector<double>(size_t(1) << m)};
  // build by doubling so each entry is an exact product of m factors
  law.prob[0] = 1.0;
  for (int j = 0; j < m; ++j) {
    size_t half = size_t(1) << j;
    for (size_t i = 0; i < half; ++i) {
      law.prob[i + half] = law.prob[i] * p;
      law.prob[i] *= (1 - p);
    }
  }
  return law;
}

ColumnLaw delta_law(int m, uint64_t y) {
  check_length(m);
  require(y < (uint64_t(1) << m), "column pattern out of range");
  ColumnLaw law{m, std::vector<double>(size_t(1) << m, 0.0)};
  law.prob[size_t(y)] = 1.0;
  return law;
}

ColumnLaw make_law(int m, std::vector<double> prob) {
  check_length(m);
  require(prob.size() == (size_t(1) << m), "law vector must have 2^m entries");
  ColumnLaw law{m, std::move(prob)};
  double s = total_mass(law);
  require(std::fabs(s - 1) <= 1e-9, "law must sum to 1");
  for (double q : law.prob) require(q >= -1e-12, "law entries must be nonnegative");
  return law;
}

double marginal(const ColumnLaw& law, int j) {
  require(j >= 0 && j < law.m, "coordinate out of range");
  double s = 0;
  for (size_t i = 0; i < law.prob.size(); ++i)
    if ((i >> j) & 1) s += law.prob[i];
  return s;
}

double density(const ColumnLaw& law) { return marginal(law, 0); }

double total_mass(const ColumnLaw& law) {
  double s = 0;
  for (double q : law.prob) s += q;
  return s;
}

static void require_pow2(const std::vector<double>& v) {
  require(!v.empty() && std::has_single_bit(v.size()), "transform length must be a power of two");
}

void upset_transform(std::vector<double>& v) {
  require_pow2(v);
  for (size_t bit = 1; bit < v.size(); bit <<= 1)
    for (size_t i = 0; i < v.size(); ++i)
      if (!(i & bit)) v[i] += v[i | bit];
}

void upset_inverse(std::vector<double>& v) {
  require_pow2(v);
  for (size_t bit = 1; bit < v.size(); bit <<= 1)
    for (size_t i = 0; i < v.size(); ++i)
      if (!(i & bit)) v[i] -= v[i | bit];
}

ColumnLaw apply_Fb(const ColumnLaw& law) {
  if (law.m < 2) fail(ErrorCode::Domain, "F_b needs a column of length at least 2");
  ColumnLaw out{law.m - 1, std::vector<double>(size_t(1) << (law.m - 1), 0.0)};
  const size_t mask = out.prob.size() - 1;
  for (size_t i = 0; i < law.prob.size(); ++i) out.prob[(i | (i >> 1)) & mask] += law.prob[i];
  return out;
}

ColumnLaw apply_FA(const ColumnLaw& law) {
  ColumnLaw out = law;
  upset_transform(out.prob);
  for (double& g : out.prob) g *= g;
  upset_inverse(out.prob);
  return out;
}

ColumnLaw apply_FA_direct(const ColumnLaw& law) {
  require(law.m <= 12, "direct pair convolution limited to m <= 12");
  ColumnLaw out{law.m, std::vector<double>(law.prob.size(), 0.0)};
  for (size_t y = 0; y < law.prob.size(); ++y)
    for (size_t z = 0; z < law.prob.size(); ++z) out.prob[y & z] += law.prob[y] * law.prob[z];
  return out;
}

static void check_rounds(int n) {
  if (n < 0 || n > kMaxExactRounds)
    fail(ErrorCode::Budget, "exact column iteration supports 0 <= n <= " + std::to_string(kMaxExactRounds) +
                                ", requested n=" + std::to_string(n));
}

double exact_win_prob_Ab(int n, double p, const LawObserver& observe) {
  check_rounds(n);
  ColumnLaw law = product_law(n + 1, p);
  if (observe) observe(law);
  for (int k = 0; k < n; ++k) {
    law = apply_FA(apply_Fb(law));
    if (observe) observe(law);
  }
  return density(law);
}

double exact_win_prob_aB(int n, double p, const LawObserver& observe) {
  check_rounds(n);
  require(p >= 0 && p <= 1, "probability must lie in [0,1]");
  ColumnLaw law = product_law(n + 1, 1 - p);
  if (observe) observe(law);
  for (int k = 0; k < n; ++k) {
    law = apply_Fb(apply_FA(law));
    if (observe) observe(law);
  }
  return 1 - density(law);
}

DensityReport check_density_bounds(const ColumnLaw& law, double tol) {
  DensityReport r;
  r.d = density(law);
  for (int j = 0; j < law.m; ++j) r.stationarity_defect = std::fmax(r.stationarity_defect, std::fabs(marginal(law, j) - r.d));
  ColumnLaw fa = apply_FA(law);
  r.d_FA = density(fa);
  auto flag = [&](bool bad, const std::string& what) {
    if (bad && r.ok) {
      r.ok = false;
      r.violation = what;
    }
  };
  flag(std::fabs(r.d_FA - r.d * r.d) > tol, "<F_A mu> != <mu>^2");
  if (law.m >= 2) {
    ColumnLaw fb = apply_Fb(law);
    r.d_Fb = density(fb);
    r.d_F = density(apply_FA(fb));
    r.d_Fhat = density(apply_Fb(fa));
    flag(r.d_Fb > 2 * r.d + tol, "<F_b mu> > 2<mu>");
    flag(r.d_F > 4 * r.d * r.d + tol, "<F mu> > 4<mu>^2");
    flag(r.d_Fhat > 2 * r.d * r.d + tol, "<Fhat mu> > 2<mu>^2");
  }
  if (!r.ok) r.violation += "; law: " + law_to_csv(law);
  return r;
}

std::string law_to_csv(const ColumnLaw& law) {
  std::ostringstream os;
  os << "index,probability\n";
  for (size_t i = 0; i < law.prob.size(); ++i) os << i << ',' << format_double(law.prob[i]) << '\n';
  return os.str();
}

}  // namespace mmg
