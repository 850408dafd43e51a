#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gradefit/fit_result.hpp"
#include "gradefit/gradebook.hpp"

namespace gradefit {

/// Seeded generator whose stream is fully specified: the engine is
/// std::mt19937_64 and all derived variates are computed here rather than by
/// the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer on [0, bound), rejection sampled.
  std::uint64_t below(std::uint64_t bound);
  // Standard normal via the Marsaglia polar method.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct Distribution {
  enum class Kind { kUniform, kNormal };
  Kind kind = Kind::kUniform;
  // Uniform: [a, b]. Normal: mean a, standard deviation b.
  double a = 0.0;
  double b = 1.0;

  double draw(Rng& rng) const;
};

struct SyntheticSpec {
  int students = 100;
  int courses = 20;
  // Each student takes a uniform count in [min_per_student, max_per_student]
  // of distinct courses.
  int min_per_student = 5;
  int max_per_student = 5;
  Distribution mu_dist{Distribution::Kind::kUniform, 2.0, 4.0};
  Distribution nu_dist{Distribution::Kind::kUniform, -1.0, 1.0};
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  // Seed of the noise stream; defaults to `seed`. Holding `seed` fixed and
  // varying this keeps the enrollment design and ground truth fixed.
  std::optional<std::uint64_t> noise_seed;
  // Round each grade to the nearest rung of the standard ladder.
  bool quantize = false;
  int max_attempts = 100;
};

struct GroundTruth {
  std::vector<std::string> student_ids;
  std::vector<std::string> course_ids;
  std::vector<double> mu;
  std::vector<double> nu;
};

struct SyntheticBook {
  GradeBook book;
  // Indexed like the book's student and course ids.
  GroundTruth truth;
  bool connected = true;
  int attempts = 1;
};

/// Draws a school from the additive model. Course selections are redrawn
/// until the enrollment graph is connected, up to max_attempts; after that
/// the last draw is returned with connected=false. Throws UsageError for an
/// infeasible spec.
SyntheticBook generate(const SyntheticSpec& spec);

struct RecoveryMetrics {
  double mu_rmse = 0.0;
  double mu_max_error = 0.0;
  double nu_rmse = 0.0;
  double nu_max_error = 0.0;
  // Spearman correlation between true and fitted aptitudes.
  double mu_rank_correlation = 1.0;
};

/// Compares a fit to the truth after normalizing both so nu sums to zero in
/// every component. Throws DataError if the entity sets differ.
RecoveryMetrics recovery_metrics(const GradeBook& book, const GroundTruth& truth,
                                 const FitResult& fit);

double spearman_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace gradefit
