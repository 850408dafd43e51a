#include "gradefit/fit_result.hpp"

#include <cmath>

#include "gradefit/components.hpp"
#include "gradefit/error.hpp"

namespace gradefit {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kLeastSquares:
      return "LS";
    case Method::kLeastSquaresComplete:
      return "LS-complete";
    case Method::kLadLp:
      return "LAD-LP";
    case Method::kLadAlternating:
      return "LAD-alternating";
  }
  return "unknown";
}

double FitResult::mu_of(std::string_view student) const {
  for (std::size_t i = 0; i < student_ids.size(); ++i) {
    if (student_ids[i] == student) return mu[i];
  }
  throw DataError("unknown student '" + std::string(student) + "'");
}

double FitResult::nu_of(std::string_view course) const {
  for (std::size_t j = 0; j < course_ids.size(); ++j) {
    if (course_ids[j] == course) return nu[j];
  }
  throw DataError("unknown course '" + std::string(course) + "'");
}

std::vector<double> residuals(const GradeBook& book, const std::vector<double>& mu,
                              const std::vector<double>& nu) {
  std::vector<double> out;
  out.reserve(book.num_records());
  for (const auto& e : book.enrollments()) out.push_back(e.grade - mu[e.student] - nu[e.course]);
  return out;
}

double mean_squared_residual(const GradeBook& book, const std::vector<double>& mu,
                             const std::vector<double>& nu) {
  double sum = 0.0;
  for (const auto& e : book.enrollments()) {
    const double r = e.grade - mu[e.student] - nu[e.course];
    sum += r * r;
  }
  return sum / static_cast<double>(book.num_records());
}

double mean_absolute_residual(const GradeBook& book, const std::vector<double>& mu,
                              const std::vector<double>& nu) {
  double sum = 0.0;
  for (const auto& e : book.enrollments()) sum += std::abs(e.grade - mu[e.student] - nu[e.course]);
  return sum / static_cast<double>(book.num_records());
}

void normalize_per_component(const GradeBook& book, std::vector<double>& mu,
                             std::vector<double>& nu) {
  const auto labels = connected_components(book);
  std::vector<double> sum(labels.count, 0.0);
  std::vector<int> count(labels.count, 0);
  for (std::size_t j = 0; j < nu.size(); ++j) {
    sum[labels.course_component[j]] += nu[j];
    ++count[labels.course_component[j]];
  }
  std::vector<double> shift(labels.count);
  for (int c = 0; c < labels.count; ++c) shift[c] = sum[c] / count[c];
  for (std::size_t j = 0; j < nu.size(); ++j) nu[j] -= shift[labels.course_component[j]];
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] += shift[labels.student_component[i]];
}

}  // namespace gradefit
