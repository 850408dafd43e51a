#include "gradefit/linprog.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>

#include "gradefit/error.hpp"

namespace gradefit {

int LpProblem::add_variable(double cost, double lower, double upper, std::string name) {
  if (!std::isfinite(cost)) throw UsageError("objective coefficient must be finite");
  if (std::isnan(lower) || std::isnan(upper) || lower == kInfinity || upper == -kInfinity ||
      lower > upper) {
    throw UsageError("invalid bounds for variable " + std::to_string(cost_.size()));
  }
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  names_.push_back(std::move(name));
  return num_variables() - 1;
}

void LpProblem::add_constraint(std::vector<LpTerm> terms, Relation relation, double rhs) {
  if (!std::isfinite(rhs)) throw UsageError("constraint right-hand side must be finite");
  for (const auto& term : terms) {
    if (term.variable < 0 || term.variable >= num_variables()) {
      throw UsageError("constraint references unknown variable " + std::to_string(term.variable));
    }
    if (!std::isfinite(term.coefficient)) throw UsageError("constraint coefficient must be finite");
  }
  // Merge repeated variables so each column holds one entry per row.
  std::sort(terms.begin(), terms.end(),
            [](const LpTerm& a, const LpTerm& b) { return a.variable < b.variable; });
  std::vector<LpTerm> merged;
  for (const auto& term : terms) {
    if (!merged.empty() && merged.back().variable == term.variable) {
      merged.back().coefficient += term.coefficient;
    } else {
      merged.push_back(term);
    }
  }
  std::erase_if(merged, [](const LpTerm& t) { return t.coefficient == 0.0; });
  rows_.push_back({std::move(merged), relation, rhs});
}

double LpProblem::objective_value(const std::vector<double>& x) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < cost_.size(); ++k) sum += cost_[k] * x[k];
  return sum;
}

double LpProblem::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t k = 0; k < cost_.size(); ++k) {
    worst = std::max({worst, lower_[k] - x[k], x[k] - upper_[k]});
  }
  for (const auto& row : rows_) {
    double activity = 0.0;
    for (const auto& t : row.terms) activity += t.coefficient * x[t.variable];
    switch (row.relation) {
      case Relation::kLessEqual:
        worst = std::max(worst, activity - row.rhs);
        break;
      case Relation::kGreaterEqual:
        worst = std::max(worst, row.rhs - activity);
        break;
      case Relation::kEqual:
        worst = std::max(worst, std::abs(activity - row.rhs));
        break;
    }
  }
  return worst;
}

std::string_view status_name(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kIterationLimit:
      return "iteration-limit";
    case LpStatus::kNumericalFailure:
      return "numerical-failure";
  }
  return "unknown";
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Vector = Eigen::VectorXd;

enum class VarState { kBasic, kAtLower, kAtUpper, kFree };

// Product-form update B_new^{-1} = E^{-1} B_old^{-1} for a pivot in `position`.
struct Eta {
  int position;
  double pivot;
  std::vector<std::pair<int, double>> entries;  // excludes position
};

// Working form: [A | -I] [x; r] = 0 with bounds on x and on the row
// activities r. Columns 0..n-1 are structural, n..n+m-1 logical.
class RevisedSimplex {
 public:
  RevisedSimplex(const LpProblem& problem, const LpOptions& options)
      : problem_(problem),
        options_(options),
        n_(problem.num_variables()),
        m_(problem.num_constraints()),
        total_(n_ + m_) {
    build_columns();
    max_iterations_ = options.max_iterations > 0 ? options.max_iterations
                                                 : std::max(100, 50 * (m_ + n_));
  }

  LpSolution solve(std::span<const double> start);

 private:
  void build_columns();
  void crash_all_logical();
  bool crash_from_point(std::span<const double> start);
  bool refactor();
  void recompute_basic_values();
  void ftran(Vector& v) const;
  void btran(Vector& v) const;
  void column(int k, Vector& out) const;
  double column_dot(int k, const Vector& y) const;

  const LpProblem& problem_;
  const LpOptions& options_;
  int n_;
  int m_;
  int total_;
  int max_iterations_;

  // Structural columns in CSC form.
  std::vector<int> col_start_;
  std::vector<int> col_row_;
  std::vector<double> col_val_;

  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<int> head_;      // basis position -> variable
  std::vector<int> position_;  // variable -> basis position or -1

  mutable Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

void RevisedSimplex::build_columns() {
  std::vector<int> counts(n_ + 1, 0);
  for (const auto& row : problem_.constraints()) {
    for (const auto& t : row.terms) ++counts[t.variable + 1];
  }
  for (int k = 0; k < n_; ++k) counts[k + 1] += counts[k];
  col_start_ = counts;
  col_row_.resize(col_start_[n_]);
  col_val_.resize(col_start_[n_]);
  std::vector<int> cursor(col_start_.begin(), col_start_.end() - 1);
  for (int r = 0; r < m_; ++r) {
    for (const auto& t : problem_.constraints()[r].terms) {
      const int slot = cursor[t.variable]++;
      col_row_[slot] = r;
      col_val_[slot] = t.coefficient;
    }
  }

  cost_.assign(total_, 0.0);
  lower_.resize(total_);
  upper_.resize(total_);
  for (int k = 0; k < n_; ++k) {
    cost_[k] = problem_.cost()[k];
    lower_[k] = problem_.lower()[k];
    upper_[k] = problem_.upper()[k];
  }
  for (int r = 0; r < m_; ++r) {
    const auto& row = problem_.constraints()[r];
    const int k = n_ + r;
    lower_[k] = row.relation == Relation::kLessEqual ? -kInfinity : row.rhs;
    upper_[k] = row.relation == Relation::kGreaterEqual ? kInfinity : row.rhs;
  }
}

void RevisedSimplex::crash_all_logical() {
  x_.assign(total_, 0.0);
  state_.assign(total_, VarState::kAtLower);
  position_.assign(total_, -1);
  head_.resize(m_);
  for (int k = 0; k < n_; ++k) {
    if (std::isfinite(lower_[k])) {
      x_[k] = lower_[k];
      state_[k] = VarState::kAtLower;
    } else if (std::isfinite(upper_[k])) {
      x_[k] = upper_[k];
      state_[k] = VarState::kAtUpper;
    } else {
      x_[k] = 0.0;
      state_[k] = VarState::kFree;
    }
  }
  for (int r = 0; r < m_; ++r) {
    head_[r] = n_ + r;
    position_[n_ + r] = r;
    state_[n_ + r] = VarState::kBasic;
  }
}

bool RevisedSimplex::crash_from_point(std::span<const double> start) {
  crash_all_logical();
  std::vector<double> activity(m_, 0.0);
  for (int k = 0; k < n_; ++k) {
    x_[k] = std::clamp(start[k], lower_[k], upper_[k]);
    for (int s = col_start_[k]; s < col_start_[k + 1]; ++s) activity[col_row_[s]] += col_val_[s] * x_[k];
  }
  std::vector<bool> swapped(m_, false);
  for (int k = 0; k < n_; ++k) {
    if (state_[k] == VarState::kFree) continue;
    const double tol = 1e-9 * std::max(1.0, std::abs(x_[k]));
    if (x_[k] <= lower_[k] + tol || x_[k] >= upper_[k] - tol) {
      const bool at_lower = x_[k] - lower_[k] <= upper_[k] - x_[k];
      x_[k] = at_lower ? lower_[k] : upper_[k];
      state_[k] = at_lower ? VarState::kAtLower : VarState::kAtUpper;
      continue;
    }
    int row = -1;
    bool row_at_upper = false;
    for (int s = col_start_[k]; s < col_start_[k + 1] && row < 0; ++s) {
      const int r = col_row_[s];
      if (swapped[r]) continue;
      const int logical = n_ + r;
      const double rtol = 1e-9 * std::max(1.0, std::abs(activity[r]));
      if (std::abs(activity[r] - lower_[logical]) <= rtol) {
        row = r;
      } else if (std::abs(activity[r] - upper_[logical]) <= rtol) {
        row = r;
        row_at_upper = true;
      }
    }
    if (row < 0) {
      // Nothing to pivot against; snap to the nearer bound.
      const bool at_lower = x_[k] - lower_[k] <= upper_[k] - x_[k];
      x_[k] = at_lower ? lower_[k] : upper_[k];
      state_[k] = at_lower ? VarState::kAtLower : VarState::kAtUpper;
      continue;
    }
    const int logical = n_ + row;
    swapped[row] = true;
    head_[row] = k;
    position_[k] = row;
    position_[logical] = -1;
    state_[k] = VarState::kBasic;
    state_[logical] = row_at_upper ? VarState::kAtUpper : VarState::kAtLower;
    x_[logical] = row_at_upper ? upper_[logical] : lower_[logical];
  }
  return refactor();
}

void RevisedSimplex::column(int k, Vector& out) const {
  out.setZero(m_);
  if (k < n_) {
    for (int s = col_start_[k]; s < col_start_[k + 1]; ++s) out[col_row_[s]] = col_val_[s];
  } else {
    out[k - n_] = -1.0;
  }
}

double RevisedSimplex::column_dot(int k, const Vector& y) const {
  if (k >= n_) return -y[k - n_];
  double sum = 0.0;
  for (int s = col_start_[k]; s < col_start_[k + 1]; ++s) sum += col_val_[s] * y[col_row_[s]];
  return sum;
}

bool RevisedSimplex::refactor() {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(col_val_.size() + m_);
  for (int p = 0; p < m_; ++p) {
    const int k = head_[p];
    if (k < n_) {
      for (int s = col_start_[k]; s < col_start_[k + 1]; ++s) {
        triplets.emplace_back(col_row_[s], p, col_val_[s]);
      }
    } else {
      triplets.emplace_back(k - n_, p, -1.0);
    }
  }
  SparseMatrix basis(m_, m_);
  basis.setFromTriplets(triplets.begin(), triplets.end());
  basis.makeCompressed();
  lu_.analyzePattern(basis);
  lu_.factorize(basis);
  etas_.clear();
  return lu_.info() == Eigen::Success;
}

void RevisedSimplex::ftran(Vector& v) const {
  if (m_ == 0) return;
  v = lu_.solve(v).eval();
  for (const auto& eta : etas_) {
    const double vp = v[eta.position] / eta.pivot;
    v[eta.position] = vp;
    if (vp != 0.0) {
      for (const auto& [i, a] : eta.entries) v[i] -= a * vp;
    }
  }
}

void RevisedSimplex::btran(Vector& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double sum = v[it->position];
    for (const auto& [i, a] : it->entries) sum -= a * v[i];
    v[it->position] = sum / it->pivot;
  }
  v = lu_.transpose().solve(v).eval();
}

void RevisedSimplex::recompute_basic_values() {
  Vector rhs = Vector::Zero(m_);
  for (int k = 0; k < total_; ++k) {
    if (state_[k] == VarState::kBasic || x_[k] == 0.0) continue;
    if (k < n_) {
      for (int s = col_start_[k]; s < col_start_[k + 1]; ++s) rhs[col_row_[s]] -= col_val_[s] * x_[k];
    } else {
      rhs[k - n_] += x_[k];
    }
  }
  ftran(rhs);
  for (int p = 0; p < m_; ++p) x_[head_[p]] = rhs[p];
}

LpSolution RevisedSimplex::solve(std::span<const double> start) {
  LpSolution solution;
  bool warm = false;
  if (!start.empty() && m_ > 0) warm = crash_from_point(start);
  if (!warm) crash_all_logical();
  if (m_ > 0 && !warm && !refactor()) {
    solution.status = LpStatus::kNumericalFailure;
    return solution;
  }
  if (m_ > 0) recompute_basic_values();

  const double feas_tol = options_.feasibility_tolerance;
  const double opt_tol = options_.optimality_tolerance;
  const double piv_tol = options_.pivot_tolerance;

  Vector y(m_), alpha(m_);
  std::vector<double> phase_cost(m_);
  int iteration = 0;
  int degenerate_run = 0;
  int recoveries = 0;
  bool bland = false;
  LpStatus status = LpStatus::kIterationLimit;

  while (true) {
    // Phase-one costs push infeasible basics toward their violated bound.
    bool phase_one = false;
    for (int p = 0; p < m_; ++p) {
      const int k = head_[p];
      if (x_[k] < lower_[k] - feas_tol) {
        phase_cost[p] = -1.0;
        phase_one = true;
      } else if (x_[k] > upper_[k] + feas_tol) {
        phase_cost[p] = 1.0;
        phase_one = true;
      } else {
        phase_cost[p] = 0.0;
      }
    }
    for (int p = 0; p < m_; ++p) y[p] = phase_one ? phase_cost[p] : cost_[head_[p]];
    if (m_ > 0) btran(y);

    // Pricing.
    int entering = -1;
    double entering_d = 0.0;
    double best = 0.0;
    for (int k = 0; k < total_; ++k) {
      const VarState st = state_[k];
      if (st == VarState::kBasic || lower_[k] == upper_[k]) continue;
      const double d = (phase_one ? 0.0 : cost_[k]) - column_dot(k, y);
      bool eligible = false;
      if (st == VarState::kAtLower) {
        eligible = d < -opt_tol;
      } else if (st == VarState::kAtUpper) {
        eligible = d > opt_tol;
      } else {
        eligible = std::abs(d) > opt_tol;
      }
      if (!eligible) continue;
      if (bland) {
        entering = k;
        entering_d = d;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        entering = k;
        entering_d = d;
      }
    }

    if (entering < 0) {
      if (!etas_.empty()) {
        // Confirm on a fresh factorization.
        if (!refactor()) {
          status = LpStatus::kNumericalFailure;
          break;
        }
        recompute_basic_values();
        continue;
      }
      status = phase_one ? LpStatus::kInfeasible : LpStatus::kOptimal;
      break;
    }
    if (iteration >= max_iterations_) {
      status = LpStatus::kIterationLimit;
      break;
    }
    ++iteration;

    const double dir = entering_d < 0.0 ? 1.0 : -1.0;
    column(entering, alpha);
    ftran(alpha);

    // Ratio test. Basic variable at p moves at rate delta = -dir * alpha[p].
    auto bounds_for = [&](int k, double& lo, double& hi) {
      if (x_[k] < lower_[k] - feas_tol) {
        lo = -kInfinity;
        hi = lower_[k];
      } else if (x_[k] > upper_[k] + feas_tol) {
        lo = upper_[k];
        hi = kInfinity;
      } else {
        lo = lower_[k];
        hi = upper_[k];
      }
    };

    int leaving_pos = -1;
    double theta = kInfinity;
    if (bland) {
      for (int p = 0; p < m_; ++p) {
        if (std::abs(alpha[p]) <= piv_tol) continue;
        const int k = head_[p];
        const double delta = -dir * alpha[p];
        double lo, hi;
        bounds_for(k, lo, hi);
        const double limit = delta > 0.0 ? hi : lo;
        if (!std::isfinite(limit)) continue;
        const double t = std::max((limit - x_[k]) / delta, 0.0);
        if (t < theta - 1e-12 ||
            (t <= theta + 1e-12 && leaving_pos >= 0 && k < head_[leaving_pos])) {
          theta = std::min(theta, t);
          leaving_pos = p;
        }
      }
    } else {
      // Harris: relaxed bound pass, then the largest pivot within reach.
      double relaxed = kInfinity;
      for (int p = 0; p < m_; ++p) {
        if (std::abs(alpha[p]) <= piv_tol) continue;
        const int k = head_[p];
        const double delta = -dir * alpha[p];
        double lo, hi;
        bounds_for(k, lo, hi);
        const double limit = delta > 0.0 ? hi + feas_tol : lo - feas_tol;
        if (!std::isfinite(limit)) continue;
        relaxed = std::min(relaxed, (limit - x_[k]) / delta);
      }
      if (std::isfinite(relaxed)) {
        double best_pivot = 0.0;
        for (int p = 0; p < m_; ++p) {
          if (std::abs(alpha[p]) <= piv_tol) continue;
          const int k = head_[p];
          const double delta = -dir * alpha[p];
          double lo, hi;
          bounds_for(k, lo, hi);
          const double limit = delta > 0.0 ? hi : lo;
          if (!std::isfinite(limit)) continue;
          const double t = (limit - x_[k]) / delta;
          if (t <= relaxed && std::abs(alpha[p]) > best_pivot) {
            best_pivot = std::abs(alpha[p]);
            leaving_pos = p;
            theta = std::max(t, 0.0);
          }
        }
      }
    }

    const double range = upper_[entering] - lower_[entering];
    const bool flip = std::isfinite(range) && range <= theta;
    if (flip) theta = range;

    if (leaving_pos < 0 && !flip) {
      if (phase_one) {
        // Cannot happen in exact arithmetic; restart from a clean basis.
        if (++recoveries > 3) {
          status = LpStatus::kNumericalFailure;
          break;
        }
        if (!refactor()) {
          status = LpStatus::kNumericalFailure;
          break;
        }
        recompute_basic_values();
        continue;
      }
      status = LpStatus::kUnbounded;
      break;
    }

    // The leaving variable's target bound depends on its pre-step status.
    bool leaving_to_upper = false;
    if (leaving_pos >= 0 && !flip) {
      const int k = head_[leaving_pos];
      double lo, hi;
      bounds_for(k, lo, hi);
      if (-dir * alpha[leaving_pos] > 0.0) {
        leaving_to_upper = hi == upper_[k];
      } else {
        leaving_to_upper = lo != lower_[k];
      }
    }

    // Update values.
    if (theta != 0.0) {
      x_[entering] += dir * theta;
      for (int p = 0; p < m_; ++p) {
        if (alpha[p] != 0.0) x_[head_[p]] -= dir * theta * alpha[p];
      }
    }

    if (theta <= 1e-12) {
      if (++degenerate_run >= options_.degeneracy_threshold) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }

    if (flip) {
      state_[entering] = dir > 0.0 ? VarState::kAtUpper : VarState::kAtLower;
      x_[entering] = dir > 0.0 ? upper_[entering] : lower_[entering];
      continue;
    }

    const int leaving = head_[leaving_pos];
    if (leaving_to_upper) {
      x_[leaving] = upper_[leaving];
      state_[leaving] = VarState::kAtUpper;
    } else {
      x_[leaving] = lower_[leaving];
      state_[leaving] = VarState::kAtLower;
    }
    if (lower_[leaving] == upper_[leaving]) state_[leaving] = VarState::kAtLower;
    position_[leaving] = -1;
    head_[leaving_pos] = entering;
    position_[entering] = leaving_pos;
    state_[entering] = VarState::kBasic;

    Eta eta{leaving_pos, alpha[leaving_pos], {}};
    for (int p = 0; p < m_; ++p) {
      if (p != leaving_pos && std::abs(alpha[p]) > 1e-14) eta.entries.emplace_back(p, alpha[p]);
    }
    etas_.push_back(std::move(eta));

    if (static_cast<int>(etas_.size()) >= options_.refactor_interval) {
      if (!refactor()) {
        // Fall back to the all-logical basis, which is always nonsingular.
        if (++recoveries > 3) {
          status = LpStatus::kNumericalFailure;
          break;
        }
        std::vector<double> keep(x_.begin(), x_.begin() + n_);
        crash_all_logical();
        for (int k = 0; k < n_; ++k) {
          x_[k] = std::clamp(keep[k], lower_[k], upper_[k]);
          if (!std::isfinite(lower_[k]) && !std::isfinite(upper_[k])) {
            state_[k] = VarState::kFree;
          }
        }
        if (!refactor()) {
          status = LpStatus::kNumericalFailure;
          break;
        }
      }
      recompute_basic_values();
    }
  }

  solution.status = status;
  solution.iterations = iteration;
  solution.x.assign(x_.begin(), x_.begin() + n_);
  solution.objective = problem_.objective_value(solution.x);
  return solution;
}

std::string lp_name(const LpProblem& problem, int k) {
  const std::string& given = problem.names()[k];
  if (given.empty()) return "x" + std::to_string(k);
  std::string out;
  for (char ch : given) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.';
    out.push_back(ok ? ch : '_');
  }
  if (std::isdigit(static_cast<unsigned char>(out.front())) || out.front() == '.') {
    out.insert(out.begin(), '_');
  }
  return out;
}

void write_terms(std::ostream& out, const LpProblem& problem, const std::vector<LpTerm>& terms) {
  if (terms.empty()) {
    out << " 0 " << lp_name(problem, 0);
    return;
  }
  for (const auto& t : terms) {
    out << (t.coefficient < 0 ? " - " : " + ") << std::abs(t.coefficient) << ' '
        << lp_name(problem, t.variable);
  }
}

}  // namespace

LpSolution lp_solve(const LpProblem& problem, const LpOptions& options,
                    std::span<const double> start) {
  if (!start.empty() && static_cast<int>(start.size()) != problem.num_variables()) {
    throw UsageError("start point has " + std::to_string(start.size()) + " values for " +
                     std::to_string(problem.num_variables()) + " variables");
  }
  if (std::any_of(start.begin(), start.end(), [](double v) { return !std::isfinite(v); })) {
    throw UsageError("start point must be finite");
  }
  RevisedSimplex simplex(problem, options);
  return simplex.solve(start);
}

void write_lp_text(const LpProblem& problem, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "\\ " << problem.num_variables() << " variables, " << problem.num_constraints()
      << " constraints\n";
  out << "Minimize\n obj:";
  std::vector<LpTerm> objective;
  for (int k = 0; k < problem.num_variables(); ++k) {
    if (problem.cost()[k] != 0.0) objective.push_back({k, problem.cost()[k]});
  }
  if (problem.num_variables() > 0) write_terms(out, problem, objective);
  out << "\nSubject To\n";
  for (int r = 0; r < problem.num_constraints(); ++r) {
    const auto& row = problem.constraints()[r];
    out << " c" << r << ':';
    write_terms(out, problem, row.terms);
    switch (row.relation) {
      case Relation::kLessEqual:
        out << " <= ";
        break;
      case Relation::kEqual:
        out << " = ";
        break;
      case Relation::kGreaterEqual:
        out << " >= ";
        break;
    }
    out << row.rhs << '\n';
  }
  out << "Bounds\n";
  for (int k = 0; k < problem.num_variables(); ++k) {
    const double lo = problem.lower()[k];
    const double hi = problem.upper()[k];
    const std::string name = lp_name(problem, k);
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      out << ' ' << name << " free\n";
    } else if (lo == hi) {
      out << ' ' << name << " = " << lo << '\n';
    } else {
      out << ' ';
      if (std::isfinite(lo)) {
        out << lo;
      } else {
        out << "-inf";
      }
      out << " <= " << name << " <= ";
      if (std::isfinite(hi)) {
        out << hi;
      } else {
        out << "+inf";
      }
      out << '\n';
    }
  }
  out << "End\n";
  out.precision(old_precision);
}

}  // namespace gradefit
