#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "gradefit/error.hpp"
#include "gradefit/linprog.hpp"
#include "oracles.hpp"

using namespace gradefit;

using gradefit::testing::random_bounded_lp;
using gradefit::testing::vertex_enumeration_optimum;

TEST_CASE("single lower bound") {
  LpProblem lp;
  const int x = lp.add_variable(1.0, -kInfinity, kInfinity);
  lp.add_constraint({{x, 1.0}}, Relation::kGreaterEqual, 3.0);
  const auto sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.x[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("one-grade LAD") {
  // min t  s.t. -t <= 2.7 - mu <= t.
  LpProblem lp;
  const int mu = lp.add_variable(0.0, -kInfinity, kInfinity);
  const int t = lp.add_variable(1.0, 0.0, kInfinity);
  lp.add_constraint({{mu, 1.0}, {t, 1.0}}, Relation::kGreaterEqual, 2.7);
  lp.add_constraint({{mu, 1.0}, {t, -1.0}}, Relation::kLessEqual, 2.7);
  const auto sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(0.0));
  CHECK(sol.x[mu] == doctest::Approx(2.7).epsilon(1e-12));
}

TEST_CASE("infeasible and unbounded problems are reported") {
  SUBCASE("infeasible") {
    LpProblem lp;
    const int x = lp.add_variable(1.0, 0.0, 1.0);
    lp.add_constraint({{x, 1.0}}, Relation::kGreaterEqual, 2.0);
    CHECK(lp_solve(lp).status == LpStatus::kInfeasible);
  }
  SUBCASE("unbounded") {
    LpProblem lp;
    const int x = lp.add_variable(-1.0, 0.0, kInfinity);
    const int y = lp.add_variable(0.0, 0.0, kInfinity);
    lp.add_constraint({{x, 1.0}, {y, -1.0}}, Relation::kLessEqual, 1.0);
    CHECK(lp_solve(lp).status == LpStatus::kUnbounded);
  }
  SUBCASE("infeasible equalities") {
    LpProblem lp;
    const int x = lp.add_variable(0.0, -kInfinity, kInfinity);
    const int y = lp.add_variable(0.0, -kInfinity, kInfinity);
    lp.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::kEqual, 1.0);
    lp.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::kEqual, 2.0);
    CHECK(lp_solve(lp).status == LpStatus::kInfeasible);
  }
}

TEST_CASE("malformed problems are rejected at construction") {
  LpProblem lp;
  CHECK_THROWS_AS(lp.add_variable(1.0, 2.0, 1.0), UsageError);
  CHECK_THROWS_AS(lp.add_variable(NAN), UsageError);
  lp.add_variable(1.0);
  CHECK_THROWS_AS(lp.add_constraint({{3, 1.0}}, Relation::kEqual, 0.0), UsageError);
  CHECK_THROWS_AS(lp.add_constraint({{0, INFINITY}}, Relation::kEqual, 0.0), UsageError);
  CHECK_THROWS_AS(lp.add_constraint({{0, 1.0}}, Relation::kEqual, NAN), UsageError);
}

TEST_CASE("iteration cap yields iteration-limit, never a silent answer") {
  std::mt19937_64 rng(5);
  LpProblem lp;
  for (int k = 0; k < 6; ++k) lp.add_variable(-1.0 - k, 0.0, 10.0);
  for (int r = 0; r < 6; ++r) {
    std::vector<LpTerm> terms;
    for (int k = 0; k < 6; ++k) terms.push_back({k, 1.0 + ((r + k) % 3)});
    lp.add_constraint(terms, Relation::kLessEqual, 20.0 + r);
  }
  LpOptions options;
  options.max_iterations = 1;
  const auto capped = lp_solve(lp, options);
  const auto full = lp_solve(lp);
  REQUIRE(full.status == LpStatus::kOptimal);
  if (full.iterations > 1) CHECK(capped.status == LpStatus::kIterationLimit);
}

TEST_CASE("random bounded LPs match vertex enumeration") {
  std::mt19937_64 rng(20240601);
  int solved = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const LpProblem lp = random_bounded_lp(rng);
    const double expected = vertex_enumeration_optimum(lp);
    const auto sol = lp_solve(lp);
    INFO("trial " << trial);
    REQUIRE(std::isfinite(expected));
    REQUIRE(sol.status == LpStatus::kOptimal);
    CHECK(std::abs(sol.objective - expected) <= 1e-6 * std::max(1.0, std::abs(expected)));
    CHECK(lp.max_violation(sol.x) <= 1e-8);
    CHECK(std::abs(sol.objective - lp.objective_value(sol.x)) <=
          1e-10 * std::max(1.0, std::abs(sol.objective)));
    ++solved;
  }
  CHECK(solved == 100);
}

TEST_CASE("scaling the objective scales the optimum") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const LpProblem lp = random_bounded_lp(rng);
    LpProblem scaled;
    for (int k = 0; k < lp.num_variables(); ++k) {
      scaled.add_variable(2.5 * lp.cost()[k], lp.lower()[k], lp.upper()[k]);
    }
    for (const auto& row : lp.constraints()) scaled.add_constraint(row.terms, row.relation, row.rhs);
    const auto a = lp_solve(lp);
    const auto b = lp_solve(scaled);
    REQUIRE(a.status == LpStatus::kOptimal);
    REQUIRE(b.status == LpStatus::kOptimal);
    CHECK(b.objective == doctest::Approx(2.5 * a.objective).epsilon(1e-9));
    // The scaled argmin is optimal for the original problem too.
    CHECK(lp.objective_value(b.x) == doctest::Approx(a.objective).epsilon(1e-9));
  }
}

TEST_CASE("degenerate problem terminates") {
  // Classic cycling example for Dantzig's rule without anti-cycling.
  LpProblem lp;
  const int x1 = lp.add_variable(-0.75);
  const int x2 = lp.add_variable(150.0);
  const int x3 = lp.add_variable(-0.02);
  const int x4 = lp.add_variable(6.0);
  lp.add_constraint({{x1, 0.25}, {x2, -60.0}, {x3, -0.04}, {x4, 9.0}}, Relation::kLessEqual, 0.0);
  lp.add_constraint({{x1, 0.5}, {x2, -90.0}, {x3, -0.02}, {x4, 3.0}}, Relation::kLessEqual, 0.0);
  lp.add_constraint({{x3, 1.0}}, Relation::kLessEqual, 1.0);
  LpOptions options;
  options.degeneracy_threshold = 1;
  const auto sol = lp_solve(lp, options);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(-0.05));
}

TEST_CASE("LP text dump") {
  LpProblem lp;
  const int x = lp.add_variable(1.0, -kInfinity, kInfinity, "mu_John");
  const int t = lp.add_variable(1.0, 0.0, kInfinity, "t0");
  lp.add_constraint({{x, 1.0}, {t, 1.0}}, Relation::kGreaterEqual, 2.7);
  lp.add_constraint({{x, 1.0}, {t, -1.0}}, Relation::kLessEqual, 2.7);
  std::ostringstream out;
  write_lp_text(lp, out);
  const std::string text = out.str();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find(" c0: + 1 mu_John + 1 t0 >= 2.7") != std::string::npos);
  CHECK(text.find(" c1: + 1 mu_John - 1 t0 <= 2.7") != std::string::npos);
  CHECK(text.find(" mu_John free") != std::string::npos);
  CHECK(text.find(" 0 <= t0 <= +inf") != std::string::npos);
  CHECK(text.rfind("End\n") == text.size() - 4);
}
