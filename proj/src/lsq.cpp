#include "gradefit/lsq.hpp"

#include <cmath>

#include "gradefit/baseline.hpp"
#include "gradefit/components.hpp"
#include "gradefit/error.hpp"

namespace gradefit {
namespace {

FitResult empty_result(const GradeBook& book, Method method) {
  FitResult fit;
  fit.method = method;
  fit.student_ids = book.student_ids();
  fit.course_ids = book.course_ids();
  fit.student_counts = book.student_counts();
  fit.course_counts = book.course_counts();
  fit.components = connected_components(book).count;
  return fit;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
  return sum;
}

// The normal-equations operator for z = [mu; nu]:
// (A'A z)_i = n_i mu_i + sum_{j in J_i} nu_j, (A'A z)_{m+j} = m_j nu_j + sum_{i in I_j} mu_i.
class NormalOperator {
 public:
  explicit NormalOperator(const GradeBook& book)
      : book_(book), m_(book.num_students()), diagonal_(m_ + book.num_courses()) {
    for (std::size_t i = 0; i < m_; ++i) diagonal_[i] = book.student_count(static_cast<int>(i));
    for (std::size_t j = 0; j < book.num_courses(); ++j) {
      diagonal_[m_ + j] = book.course_count(static_cast<int>(j));
    }
  }

  void apply(const std::vector<double>& z, std::vector<double>& out) const {
    for (std::size_t k = 0; k < z.size(); ++k) out[k] = diagonal_[k] * z[k];
    for (const auto& e : book_.enrollments()) {
      out[e.student] += z[m_ + e.course];
      out[m_ + e.course] += z[e.student];
    }
  }

  // b - A'A z, i.e. A'(X - A z).
  void residual(const std::vector<double>& z, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& e : book_.enrollments()) {
      const double r = e.grade - z[e.student] - z[m_ + e.course];
      out[e.student] += r;
      out[m_ + e.course] += r;
    }
  }

  const std::vector<double>& diagonal() const { return diagonal_; }

 private:
  const GradeBook& book_;
  std::size_t m_;
  std::vector<double> diagonal_;
};

void finish(const GradeBook& book, FitResult& fit) {
  fit.objective = mean_squared_residual(book, fit.mu, fit.nu);
  fit.scale = std::sqrt(fit.objective);
  auto errors = standard_errors(fit.scale, fit.student_counts, fit.course_counts);
  fit.stderr_mu = std::move(errors.mu);
  fit.stderr_nu = std::move(errors.nu);
}

}  // namespace

FitResult fit_ls_complete(const GradeBook& book, ErrorBars bars) {
  if (!book.is_complete()) {
    throw DataError("closed-form fit needs a complete book: " +
                    std::to_string(book.num_records()) + " records for " +
                    std::to_string(book.num_students()) + " students x " +
                    std::to_string(book.num_courses()) + " courses");
  }
  FitResult fit = empty_result(book, Method::kLeastSquaresComplete);
  const std::size_t m = book.num_students();
  const std::size_t n = book.num_courses();

  double total = 0.0;
  for (const auto& e : book.enrollments()) total += e.grade;
  const double grand_mean = total / static_cast<double>(m * n);

  fit.mu.resize(m);
  for (std::size_t i = 0; i < m; ++i) fit.mu[i] = gpa(book, static_cast<int>(i));
  fit.nu.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    fit.nu[j] = course_average(book, static_cast<int>(j)) - grand_mean;
  }
  fit.iterations = 0;
  fit.converged = true;
  fit.solver_status = "closed-form";
  finish(book, fit);

  if (bars == ErrorBars::kExact) {
    auto [mu_err, nu_err] =
        standard_errors_complete_exact(fit.scale, static_cast<int>(m), static_cast<int>(n));
    fit.stderr_mu.assign(m, mu_err);
    fit.stderr_nu.assign(n, nu_err);
  }
  return fit;
}

FitResult fit_ls(const GradeBook& book, const LsOptions& options) {
  FitResult fit = empty_result(book, Method::kLeastSquares);
  const std::size_t m = book.num_students();
  const std::size_t size = m + book.num_courses();
  const double threshold = options.tolerance * std::sqrt(static_cast<double>(book.num_records()));

  const NormalOperator op(book);
  const auto& diag = op.diagonal();

  // Start from GPAs with nu = 0; the student equations then hold exactly.
  std::vector<double> z(size, 0.0);
  for (std::size_t i = 0; i < m; ++i) z[i] = gpa(book, static_cast<int>(i));

  std::vector<double> r(size), p(size), q(size), s(size);
  op.residual(z, r);
  for (std::size_t k = 0; k < size; ++k) s[k] = r[k] / diag[k];
  p = s;
  double rho = dot(r, s);

  int iteration = 0;
  bool converged = false;
  while (true) {
    if (std::sqrt(dot(r, r)) <= threshold) {
      // Confirm against the true residual before stopping.
      op.residual(z, r);
      if (std::sqrt(dot(r, r)) <= threshold) {
        converged = true;
        break;
      }
      for (std::size_t k = 0; k < size; ++k) s[k] = r[k] / diag[k];
      p = s;
      rho = dot(r, s);
    }
    if (iteration >= options.max_iterations) break;
    ++iteration;

    op.apply(p, q);
    const double curvature = dot(p, q);
    if (!(curvature > 0.0)) break;
    const double alpha = rho / curvature;
    for (std::size_t k = 0; k < size; ++k) {
      z[k] += alpha * p[k];
      r[k] -= alpha * q[k];
    }
    if (iteration % 50 == 0) op.residual(z, r);
    for (std::size_t k = 0; k < size; ++k) s[k] = r[k] / diag[k];
    const double rho_next = dot(r, s);
    const double beta = rho_next / rho;
    rho = rho_next;
    for (std::size_t k = 0; k < size; ++k) p[k] = s[k] + beta * p[k];
  }

  fit.mu.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(m));
  fit.nu.assign(z.begin() + static_cast<std::ptrdiff_t>(m), z.end());
  normalize_per_component(book, fit.mu, fit.nu);
  fit.iterations = iteration;
  fit.converged = converged;
  fit.solver_status = converged ? "converged" : "iteration-limit";
  finish(book, fit);
  return fit;
}

double estimate_scale_ls(const GradeBook& book, const std::vector<double>& mu,
                         const std::vector<double>& nu) {
  if (mu.size() != book.num_students() || nu.size() != book.num_courses()) {
    throw UsageError("parameter vectors do not match the book");
  }
  return std::sqrt(mean_squared_residual(book, mu, nu));
}

StandardErrors standard_errors(double scale, std::span<const int> student_counts,
                               std::span<const int> course_counts) {
  if (scale < 0.0) throw UsageError("negative scale");
  StandardErrors out;
  out.mu.reserve(student_counts.size());
  out.nu.reserve(course_counts.size());
  for (int count : student_counts) {
    if (count <= 0) throw UsageError("counts must be positive");
    out.mu.push_back(scale / std::sqrt(static_cast<double>(count)));
  }
  for (int count : course_counts) {
    if (count <= 0) throw UsageError("counts must be positive");
    out.nu.push_back(scale / std::sqrt(static_cast<double>(count)));
  }
  return out;
}

std::pair<double, double> standard_errors_complete_exact(double scale, int students,
                                                         int courses) {
  if (scale < 0.0 || students <= 0 || courses <= 0) {
    throw UsageError("scale must be non-negative and dimensions positive");
  }
  const double m = students;
  const double n = courses;
  return {scale / std::sqrt(n), scale * std::sqrt((1.0 - 1.0 / n) / m)};
}

std::vector<double> ls_stationarity(const GradeBook& book, const std::vector<double>& mu,
                                    const std::vector<double>& nu) {
  const std::size_t m = book.num_students();
  std::vector<double> out(m + book.num_courses(), 0.0);
  for (const auto& e : book.enrollments()) {
    const double r = e.grade - mu[e.student] - nu[e.course];
    out[e.student] += r;
    out[m + e.course] += r;
  }
  return out;
}

}  // namespace gradefit
