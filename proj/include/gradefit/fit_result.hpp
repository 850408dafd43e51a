#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gradefit/gradebook.hpp"

namespace gradefit {

enum class Method { kLeastSquares, kLeastSquaresComplete, kLadLp, kLadAlternating };

std::string_view method_name(Method method);

/// Aptitudes, inflatednesses and error bars for one fitted book.
///
/// Vectors are indexed like the book's student_ids() / course_ids(). nu sums
/// to zero within every connected component. objective is the mean loss over
/// all N records: squared residuals for least squares, absolute residuals for
/// LAD.
struct FitResult {
  Method method = Method::kLeastSquares;
  std::vector<std::string> student_ids;
  std::vector<std::string> course_ids;
  std::vector<double> mu;
  std::vector<double> nu;
  std::vector<double> stderr_mu;
  std::vector<double> stderr_nu;
  std::vector<int> student_counts;
  std::vector<int> course_counts;
  double scale = 0.0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string solver_status;
  int components = 1;

  bool disconnected() const { return components > 1; }

  /// Throws DataError for an unknown id.
  double mu_of(std::string_view student) const;
  double nu_of(std::string_view course) const;
};

/// Residuals X_ij - mu_i - nu_j in enrollment order.
std::vector<double> residuals(const GradeBook& book, const std::vector<double>& mu,
                              const std::vector<double>& nu);

double mean_squared_residual(const GradeBook& book, const std::vector<double>& mu,
                             const std::vector<double>& nu);
double mean_absolute_residual(const GradeBook& book, const std::vector<double>& mu,
                              const std::vector<double>& nu);

/// Shifts each connected component so that its nu values sum to zero, moving
/// the removed mean onto the component's mu values. Residuals are unchanged.
void normalize_per_component(const GradeBook& book, std::vector<double>& mu,
                             std::vector<double>& nu);

}  // namespace gradefit
