#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gradefit/baseline.hpp"
#include "gradefit/error.hpp"
#include "gradefit/grade_scale.hpp"
#include "gradefit/io.hpp"
#include "gradefit/lad.hpp"
#include "gradefit/lsq.hpp"
#include "gradefit/simulate.hpp"

using namespace gradefit;

namespace {

SyntheticSpec shape(int students, int courses, int per_student, double sigma, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.students = students;
  spec.courses = courses;
  spec.min_per_student = per_student;
  spec.max_per_student = per_student;
  spec.noise_sigma = sigma;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("rng stream is pinned") {
  Rng a(123), b(123);
  for (int k = 0; k < 100; ++k) CHECK(a.uniform() == b.uniform());
  Rng r(5);
  for (int k = 0; k < 1000; ++k) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
  }
  // Moments of the polar normal.
  Rng g(9);
  double sum = 0.0, sq = 0.0;
  const int draws = 200000;
  for (int k = 0; k < draws; ++k) {
    const double z = g.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / draws) < 0.01);
  CHECK(std::abs(sq / draws - 1.0) < 0.02);
}

TEST_CASE("generation is deterministic") {
  const SyntheticSpec spec = shape(50, 10, 4, 0.3, 77);
  const SyntheticBook a = generate(spec);
  const SyntheticBook b = generate(spec);
  CHECK(a.book.records() == b.book.records());
  CHECK(a.truth.mu == b.truth.mu);
  CHECK(a.truth.nu == b.truth.nu);

  SyntheticSpec other = spec;
  other.seed = 78;
  CHECK_FALSE(generate(other).book.records() == a.book.records());
}

TEST_CASE("a separate noise seed keeps the design") {
  SyntheticSpec spec = shape(40, 8, 3, 0.5, 1);
  spec.noise_seed = 100;
  const SyntheticBook a = generate(spec);
  spec.noise_seed = 101;
  const SyntheticBook b = generate(spec);
  REQUIRE(a.book.num_records() == b.book.num_records());
  CHECK(a.truth.mu == b.truth.mu);
  bool differs = false;
  for (std::size_t r = 0; r < a.book.num_records(); ++r) {
    CHECK(a.book.records()[r].student == b.book.records()[r].student);
    CHECK(a.book.records()[r].course == b.book.records()[r].course);
    differs = differs || a.book.records()[r].grade != b.book.records()[r].grade;
  }
  CHECK(differs);
}

TEST_CASE("generated books honor their parameters") {
  SyntheticSpec spec = shape(60, 12, 3, 0.0, 5);
  spec.max_per_student = 5;
  const SyntheticBook sim = generate(spec);
  CHECK(sim.connected);
  CHECK(sim.book.num_students() == 60);
  for (std::size_t i = 0; i < sim.book.num_students(); ++i) {
    const int k = sim.book.student_count(static_cast<int>(i));
    CHECK(k >= 3);
    CHECK(k <= 5);
  }
  const double sum = std::accumulate(sim.truth.nu.begin(), sim.truth.nu.end(), 0.0);
  CHECK(std::abs(sum) <= 1e-12);
  for (const auto& e : sim.book.enrollments()) {
    CHECK(e.grade == doctest::Approx(sim.truth.mu[e.student] + sim.truth.nu[e.course]).epsilon(1e-14));
  }
}

TEST_CASE("infeasible specs are rejected") {
  CHECK_THROWS_AS(generate(shape(10, 20, 30, 0.0, 1)), UsageError);
  CHECK_THROWS_AS(generate(shape(0, 20, 3, 0.0, 1)), UsageError);
  CHECK_THROWS_AS(generate(shape(10, 20, 0, 0.0, 1)), UsageError);
  CHECK_THROWS_AS(generate(shape(10, 20, 3, -1.0, 1)), UsageError);
}

TEST_CASE("disconnected designs are flagged") {
  // One course each can never connect several students.
  SyntheticSpec spec = shape(5, 5, 1, 0.0, 3);
  spec.max_attempts = 5;
  const SyntheticBook sim = generate(spec);
  CHECK_FALSE(sim.connected);
  CHECK(sim.attempts == 5);
}

TEST_CASE("quantized grades land on the ladder") {
  SyntheticSpec spec = shape(30, 6, 3, 0.4, 2);
  spec.quantize = true;
  const SyntheticBook sim = generate(spec);
  const GradeScale scale = GradeScale::standard();
  for (const auto& r : sim.book.records()) {
    const bool on_ladder = std::any_of(scale.ladder().begin(), scale.ladder().end(),
                                       [&](const LetterGrade& g) { return g.points == r.grade; });
    CHECK(on_ladder);
  }
}

TEST_CASE("zero-noise books are recovered exactly") {
  const SyntheticBook small = generate(shape(4, 6, 4, 0.0, 11));
  REQUIRE(small.connected);
  const auto metrics = recovery_metrics(small.book, small.truth, fit_ls(small.book));
  CHECK(metrics.mu_max_error <= 1e-8);
  CHECK(metrics.nu_max_error <= 1e-8);

  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const SyntheticBook sim = generate(shape(200, 40, 6, 0.0, seed));
    REQUIRE(sim.connected);
    for (const FitResult& fit : {fit_ls(sim.book), fit_lad_lp(sim.book)}) {
      REQUIRE(fit.converged);
      const auto m = recovery_metrics(sim.book, sim.truth, fit);
      CHECK(m.mu_max_error <= 1e-8);
      CHECK(m.nu_max_error <= 1e-8);
      CHECK(m.mu_rank_correlation == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("noisy scale estimate") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SyntheticBook sim = generate(shape(1000, 100, 8, 0.5, seed));
    const FitResult fit = fit_ls(sim.book);
    CHECK(std::abs(fit.scale - 0.5) <= 0.05);
    const auto metrics = recovery_metrics(sim.book, sim.truth, fit);
    const double mean_count = static_cast<double>(sim.book.num_records()) / sim.book.num_courses();
    const double predicted = fit.scale / std::sqrt(mean_count);
    CHECK(metrics.nu_rmse >= predicted / 2.0);
    CHECK(metrics.nu_rmse <= predicted * 2.0);
  }
}

TEST_CASE("recovery metrics") {
  const SyntheticBook sim = generate(shape(30, 8, 3, 0.0, 4));
  FitResult fit;
  fit.student_ids = sim.truth.student_ids;
  fit.course_ids = sim.truth.course_ids;
  fit.mu = sim.truth.mu;
  fit.nu = sim.truth.nu;
  auto exact = recovery_metrics(sim.book, sim.truth, fit);
  CHECK(exact.mu_rmse == 0.0);
  CHECK(exact.nu_max_error == 0.0);
  CHECK(exact.mu_rank_correlation == 1.0);

  for (auto& v : fit.mu) v += 0.8;
  for (auto& v : fit.nu) v -= 0.8;
  const auto shifted = recovery_metrics(sim.book, sim.truth, fit);
  CHECK(shifted.mu_max_error <= 1e-12);
  CHECK(shifted.nu_max_error <= 1e-12);

  fit.mu.pop_back();
  CHECK_THROWS_AS(recovery_metrics(sim.book, sim.truth, fit), DataError);
}

TEST_CASE("spearman correlation") {
  CHECK(spearman_correlation({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman_correlation({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(spearman_correlation({1, 2, 2, 3}, {1, 2, 2, 3}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(spearman_correlation({1, 2}, {1}), UsageError);
}

TEST_CASE("GPA flattens what the joint fit separates") {
  const GradeBook book =
      parse_input_file(std::string(GRADEFIT_DATA_DIR) + "/truncated.txt", GradeScale::thirds());
  const FitResult fit = fit_ls(book);
  std::vector<double> gpas;
  for (std::size_t i = 0; i < book.num_students(); ++i) gpas.push_back(gpa(book, static_cast<int>(i)));
  const auto [gpa_lo, gpa_hi] = std::minmax_element(gpas.begin(), gpas.end());
  const auto [mu_lo, mu_hi] = std::minmax_element(fit.mu.begin(), fit.mu.end());
  CHECK(std::abs((*gpa_hi - *gpa_lo) - 0.67) <= 0.005);
  CHECK(std::abs((*mu_hi - *mu_lo) - 2.33) <= 0.005);
}

TEST_CASE("generated books round-trip through the record format") {
  SyntheticSpec spec = shape(25, 7, 3, 0.37, 8);
  const SyntheticBook sim = generate(spec);
  std::stringstream text;
  write_grade_records(sim.book, text);
  const GradeBook back = parse_grade_records(text, GradeScale::standard());
  CHECK(back.records() == sim.book.records());
}
