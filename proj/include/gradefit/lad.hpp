#pragma once

#include <span>
#include <vector>

#include "gradefit/fit_result.hpp"
#include "gradefit/gradebook.hpp"
#include "gradefit/linprog.hpp"

namespace gradefit {

/// Middle order statistic; mean of the two middle ones for even counts.
/// Throws UsageError on empty input.
double median(std::span<const double> values);

struct LadAlternatingOptions {
  int max_sweeps = 1000;
  double change_tolerance = 1e-12;
};

/// Alternating medians: nu = 0, mu_i = median of student i's grades, then
/// sweep nu_j = median_i(X_ij - mu_i) and mu_i = median_j(X_ij - nu_j) until
/// nothing moves. Runs over each student's and course's own record lists, so
/// sparse books are accepted. nu is re-centered per component afterwards.
FitResult fit_lad_alternating(const GradeBook& book, const LadAlternatingOptions& options = {});

/// Variable layout of the LAD linear program built by lad_problem():
/// mu first, then nu, then one t per record in enrollment order.
struct LadLayout {
  int mu_offset = 0;
  int nu_offset = 0;
  int t_offset = 0;
};

/// min sum t  s.t.  -t <= X_ij - mu_i - nu_j <= t,  sum_j nu_j = 0.
LpProblem lad_problem(const GradeBook& book, LadLayout* layout = nullptr);

/// Global LAD optimum via lp_solve, started from the alternating-medians
/// point. Anything short of an optimal LP status gives converged=false, with
/// the status name in solver_status.
FitResult fit_lad_lp(const GradeBook& book, const LpOptions& options = {});

}  // namespace gradefit
