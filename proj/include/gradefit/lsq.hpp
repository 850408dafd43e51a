#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gradefit/fit_result.hpp"
#include "gradefit/gradebook.hpp"

namespace gradefit {

struct LsOptions {
  // Converged when the 2-norm of the stationarity residual drops below
  // tolerance * sqrt(N).
  double tolerance = 1e-11;
  int max_iterations = 10000;
};

enum class ErrorBars { kApproximate, kExact };

/// Closed-form least squares for a complete book: row means for mu and
/// column means minus the grand mean for nu.
///
/// With ErrorBars::kExact the course error bars use the complete-data factor
/// sqrt((1 - 1/n) / m). Throws DataError when the book is not complete.
FitResult fit_ls_complete(const GradeBook& book, ErrorBars bars = ErrorBars::kApproximate);

/// Least squares for an arbitrary sparse book.
///
/// Solves the normal equations with Jacobi-preconditioned conjugate gradients
/// starting from the GPA vector, then normalizes nu to sum to zero within
/// each connected component. Hitting the iteration cap sets converged=false.
FitResult fit_ls(const GradeBook& book, const LsOptions& options = {});

/// sqrt of the mean squared residual (divisor N).
double estimate_scale_ls(const GradeBook& book, const std::vector<double>& mu,
                         const std::vector<double>& nu);

struct StandardErrors {
  std::vector<double> mu;
  std::vector<double> nu;
};

// scale / sqrt(count) for every student and course.
StandardErrors standard_errors(double scale, std::span<const int> student_counts,
                               std::span<const int> course_counts);

// Complete m x n design: (scale / sqrt(n), scale * sqrt((1 - 1/n) / m)).
std::pair<double, double> standard_errors_complete_exact(double scale, int students,
                                                         int courses);

/// Stationarity residuals of the least-squares normal equations:
/// per student sum_j (X_ij - mu_i - nu_j), then per course sum_i (...).
std::vector<double> ls_stationarity(const GradeBook& book, const std::vector<double>& mu,
                                    const std::vector<double>& nu);

}  // namespace gradefit
