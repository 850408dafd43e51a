#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gradefit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LpTerm {
  int variable;
  double coefficient;
};

struct LpConstraint {
  std::vector<LpTerm> terms;
  Relation relation;
  double rhs;
};

/// A minimization LP: min c'x subject to sparse rows and variable bounds.
///
/// Construction validates indices and finiteness and throws UsageError on
/// malformed input, so a problem that exists is well formed.
class LpProblem {
 public:
  LpProblem() = default;

  /// Returns the new variable's index.
  int add_variable(double cost, double lower = 0.0, double upper = kInfinity,
                   std::string name = {});
  void add_constraint(std::vector<LpTerm> terms, Relation relation, double rhs);

  int num_variables() const { return static_cast<int>(cost_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }

  const std::vector<double>& cost() const { return cost_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<LpConstraint>& constraints() const { return rows_; }
  const std::vector<std::string>& names() const { return names_; }

  double objective_value(const std::vector<double>& x) const;
  /// Largest bound or row violation of x (0 when feasible).
  double max_violation(const std::vector<double>& x) const;

 private:
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::string> names_;
  std::vector<LpConstraint> rows_;
};

enum class LpStatus { kOptimal, kUnbounded, kInfeasible, kIterationLimit, kNumericalFailure };

std::string_view status_name(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

struct LpOptions {
  double feasibility_tolerance = 1e-8;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degeneracy_threshold = 50;
  // Basis updates between refactorizations.
  int refactor_interval = 64;
  // <= 0 means 50 * (rows + columns).
  int max_iterations = 0;
};

/// Bounded-variable revised primal simplex.
///
/// Phase one minimizes the sum of bound infeasibilities of an all-logical
/// starting basis. Dantzig pricing is used until a run of degenerate pivots,
/// then Bland's smallest-index rule until progress resumes. The basis is kept
/// as a sparse LU factorization plus product-form eta updates.
///
/// A non-empty `start` (one value per variable) seeds the first basis: free
/// variables stay nonbasic at their start values, and a bounded variable
/// strictly inside its bounds replaces the logical of a row it makes tight.
/// If that basis is singular the all-logical crash is used instead. An
/// optimal start point is returned unchanged up to degenerate pivots.
LpSolution lp_solve(const LpProblem& problem, const LpOptions& options = {},
                    std::span<const double> start = {});

/// Writes the problem in CPLEX LP text format, for cross-checking with other
/// solvers.
void write_lp_text(const LpProblem& problem, std::ostream& out);

}  // namespace gradefit
