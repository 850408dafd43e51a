#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gradefit/linprog.hpp"

namespace gradefit::testing {

// Brute-force vertex enumeration for a problem whose variables all have
// finite bounds: every vertex is the solution of `n` active constraints drawn
// from the rows and the bounds. Returns +inf when infeasible.
inline double vertex_enumeration_optimum(const LpProblem& lp) {
  const int n = lp.num_variables();
  struct Plane {
    std::vector<double> a;
    double b;
    bool mandatory;
  };
  std::vector<Plane> planes;
  for (const auto& row : lp.constraints()) {
    std::vector<double> a(n, 0.0);
    for (const auto& t : row.terms) a[t.variable] = t.coefficient;
    planes.push_back({a, row.rhs, row.relation == Relation::kEqual});
  }
  for (int k = 0; k < n; ++k) {
    std::vector<double> a(n, 0.0);
    a[k] = 1.0;
    planes.push_back({a, lp.lower()[k], false});
    planes.push_back({a, lp.upper()[k], false});
  }
  const int p = static_cast<int>(planes.size());
  double best = INFINITY;
  // Enumerate n-subsets of planes.
  std::vector<bool> mask(p, false);
  std::fill(mask.begin(), mask.begin() + n, true);
  do {
    bool has_all_equalities = true;
    for (int q = 0; q < p; ++q) {
      if (planes[q].mandatory && !mask[q]) has_all_equalities = false;
    }
    if (!has_all_equalities) continue;
    std::vector<std::vector<double>> m;
    for (int q = 0; q < p; ++q) {
      if (!mask[q]) continue;
      auto row = planes[q].a;
      row.push_back(planes[q].b);
      m.push_back(row);
    }
    // Gaussian elimination with partial pivoting.
    bool singular = false;
    for (int c = 0; c < n && !singular; ++c) {
      int piv = c;
      for (int r = c + 1; r < n; ++r) {
        if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
      }
      if (std::abs(m[piv][c]) < 1e-10) {
        singular = true;
        break;
      }
      std::swap(m[c], m[piv]);
      for (int r = 0; r < n; ++r) {
        if (r == c) continue;
        const double f = m[r][c] / m[c][c];
        for (int k = c; k <= n; ++k) m[r][k] -= f * m[c][k];
      }
    }
    if (singular) continue;
    std::vector<double> x(n);
    for (int c = 0; c < n; ++c) x[c] = m[c][n] / m[c][c];
    if (lp.max_violation(x) > 1e-9) continue;
    best = std::min(best, lp.objective_value(x));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

inline LpProblem random_bounded_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nvars(1, 6), nrows(0, 8), rel(0, 2);
  std::uniform_real_distribution<double> coef(-3.0, 3.0), unit(0.0, 1.0);
  LpProblem lp;
  const int n = nvars(rng);
  std::vector<double> x0(n);
  for (int k = 0; k < n; ++k) {
    const double lo = -5.0 + 4.0 * unit(rng);
    const double hi = lo + 1.0 + 6.0 * unit(rng);
    lp.add_variable(coef(rng), lo, hi);
    x0[k] = lo + (hi - lo) * unit(rng);
  }
  const int rows = nrows(rng);
  for (int r = 0; r < rows; ++r) {
    std::vector<LpTerm> terms;
    double activity = 0.0;
    for (int k = 0; k < n; ++k) {
      if (unit(rng) < 0.3) continue;
      // Small integers keep the vertex oracle well conditioned.
      const double a = std::round(coef(rng));
      if (a == 0.0) continue;
      terms.push_back({k, a});
      activity += a * x0[k];
    }
    if (terms.empty()) continue;
    const int kind = rel(rng);
    // x0 stays feasible, so the region is non-empty.
    if (kind == 0) lp.add_constraint(terms, Relation::kLessEqual, activity + unit(rng));
    if (kind == 1) lp.add_constraint(terms, Relation::kGreaterEqual, activity - unit(rng));
    if (kind == 2 && r % 3 == 0) lp.add_constraint(terms, Relation::kEqual, activity);
  }
  return lp;
}

}  // namespace gradefit::testing
