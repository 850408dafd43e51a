#include "gradefit/lad.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "gradefit/components.hpp"
#include "gradefit/error.hpp"
#include "gradefit/lsq.hpp"

namespace gradefit {
namespace {

// Median of a scratch buffer; reorders it.
double median_in_place(std::vector<double>& values) {
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

FitResult lad_result(const GradeBook& book, Method method) {
  FitResult fit;
  fit.method = method;
  fit.student_ids = book.student_ids();
  fit.course_ids = book.course_ids();
  fit.student_counts = book.student_counts();
  fit.course_counts = book.course_counts();
  fit.components = connected_components(book).count;
  return fit;
}

// Objective is the mean absolute residual. Error bars use the root mean
// squared residual at the LAD point as the scale, a heuristic.
void finish(const GradeBook& book, FitResult& fit) {
  fit.objective = mean_absolute_residual(book, fit.mu, fit.nu);
  fit.scale = std::sqrt(mean_squared_residual(book, fit.mu, fit.nu));
  auto errors = standard_errors(fit.scale, fit.student_counts, fit.course_counts);
  fit.stderr_mu = std::move(errors.mu);
  fit.stderr_nu = std::move(errors.nu);
}

std::string sanitized(std::string_view prefix, const std::string& id) {
  std::string out(prefix);
  for (char ch : id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
    out.push_back(ok ? ch : '_');
  }
  return out;
}

}  // namespace

double median(std::span<const double> values) {
  if (values.empty()) throw UsageError("median of an empty list");
  std::vector<double> scratch(values.begin(), values.end());
  return median_in_place(scratch);
}

FitResult fit_lad_alternating(const GradeBook& book, const LadAlternatingOptions& options) {
  FitResult fit = lad_result(book, Method::kLadAlternating);
  const auto& records = book.enrollments();
  const std::size_t m = book.num_students();
  const std::size_t n = book.num_courses();

  fit.nu.assign(n, 0.0);
  fit.mu.assign(m, 0.0);
  std::vector<double> scratch;
  for (std::size_t i = 0; i < m; ++i) {
    scratch.clear();
    for (int r : book.student_records(static_cast<int>(i))) scratch.push_back(records[r].grade);
    fit.mu[i] = median_in_place(scratch);
  }

  int sweep = 0;
  bool converged = false;
  while (sweep < options.max_sweeps) {
    ++sweep;
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      scratch.clear();
      for (int r : book.course_records(static_cast<int>(j))) {
        scratch.push_back(records[r].grade - fit.mu[records[r].student]);
      }
      const double updated = median_in_place(scratch);
      change = std::max(change, std::abs(updated - fit.nu[j]));
      fit.nu[j] = updated;
    }
    for (std::size_t i = 0; i < m; ++i) {
      scratch.clear();
      for (int r : book.student_records(static_cast<int>(i))) {
        scratch.push_back(records[r].grade - fit.nu[records[r].course]);
      }
      const double updated = median_in_place(scratch);
      change = std::max(change, std::abs(updated - fit.mu[i]));
      fit.mu[i] = updated;
    }
    if (change <= options.change_tolerance) {
      converged = true;
      break;
    }
  }

  normalize_per_component(book, fit.mu, fit.nu);
  fit.iterations = sweep;
  fit.converged = converged;
  fit.solver_status = converged ? "fixed-point" : "iteration-limit";
  finish(book, fit);
  return fit;
}

LpProblem lad_problem(const GradeBook& book, LadLayout* layout) {
  LpProblem lp;
  LadLayout where;
  where.mu_offset = 0;
  for (const auto& id : book.student_ids()) lp.add_variable(0.0, -kInfinity, kInfinity, sanitized("mu_", id));
  where.nu_offset = lp.num_variables();
  for (const auto& id : book.course_ids()) lp.add_variable(0.0, -kInfinity, kInfinity, sanitized("nu_", id));
  where.t_offset = lp.num_variables();
  for (std::size_t r = 0; r < book.num_records(); ++r) {
    lp.add_variable(1.0, 0.0, kInfinity, "t" + std::to_string(r));
  }

  const auto& records = book.enrollments();
  for (std::size_t r = 0; r < records.size(); ++r) {
    const int mu = where.mu_offset + records[r].student;
    const int nu = where.nu_offset + records[r].course;
    const int t = where.t_offset + static_cast<int>(r);
    // X - mu - nu <= t  and  X - mu - nu >= -t.
    lp.add_constraint({{mu, 1.0}, {nu, 1.0}, {t, 1.0}}, Relation::kGreaterEqual, records[r].grade);
    lp.add_constraint({{mu, 1.0}, {nu, 1.0}, {t, -1.0}}, Relation::kLessEqual, records[r].grade);
  }
  std::vector<LpTerm> sum_nu;
  for (std::size_t j = 0; j < book.num_courses(); ++j) {
    sum_nu.push_back({where.nu_offset + static_cast<int>(j), 1.0});
  }
  lp.add_constraint(std::move(sum_nu), Relation::kEqual, 0.0);

  if (layout) *layout = where;
  return lp;
}

FitResult fit_lad_lp(const GradeBook& book, const LpOptions& options) {
  FitResult fit = lad_result(book, Method::kLadLp);
  LadLayout layout;
  const LpProblem lp = lad_problem(book, &layout);

  // Seed the simplex with the alternating-medians point.
  const FitResult seed = fit_lad_alternating(book);
  std::vector<double> start(lp.num_variables(), 0.0);
  std::copy(seed.mu.begin(), seed.mu.end(), start.begin() + layout.mu_offset);
  std::copy(seed.nu.begin(), seed.nu.end(), start.begin() + layout.nu_offset);
  const auto resid = residuals(book, seed.mu, seed.nu);
  for (std::size_t r = 0; r < resid.size(); ++r) start[layout.t_offset + r] = std::abs(resid[r]);
  const LpSolution solution = lp_solve(lp, options, start);

  const auto m = static_cast<std::ptrdiff_t>(book.num_students());
  const auto n = static_cast<std::ptrdiff_t>(book.num_courses());
  fit.mu.assign(solution.x.begin() + layout.mu_offset, solution.x.begin() + layout.mu_offset + m);
  fit.nu.assign(solution.x.begin() + layout.nu_offset, solution.x.begin() + layout.nu_offset + n);
  normalize_per_component(book, fit.mu, fit.nu);
  fit.iterations = solution.iterations;
  fit.converged = solution.status == LpStatus::kOptimal;
  fit.solver_status = std::string(status_name(solution.status));
  finish(book, fit);
  return fit;
}

}  // namespace gradefit
