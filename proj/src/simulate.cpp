#include "gradefit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "gradefit/components.hpp"
#include "gradefit/error.hpp"
#include "gradefit/grade_scale.hpp"

namespace gradefit {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string padded_id(char prefix, int index, int total) {
  const int width = static_cast<int>(std::to_string(std::max(total - 1, 0)).size());
  std::string digits = std::to_string(index);
  return prefix + std::string(width - static_cast<int>(digits.size()), '0') + digits;
}

double nearest_rung(const GradeScale& scale, double value) {
  double best = scale.ladder().front().points;
  for (const auto& rung : scale.ladder()) {
    if (std::abs(rung.points - value) < std::abs(best - value)) best = rung.points;
  }
  return best;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    while (hi + 1 < order.size() && values[order[hi + 1]] == values[order[lo]]) ++hi;
    const double rank = 0.5 * static_cast<double>(lo + hi);
    for (std::size_t k = lo; k <= hi; ++k) ranks[order[k]] = rank;
    lo = hi + 1;
  }
  return ranks;
}

}  // namespace

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return draw % bound;
}

double Rng::normal() {
  if (spare_) {
    const double out = *spare_;
    spare_.reset();
    return out;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  return u * factor;
}

double Distribution::draw(Rng& rng) const {
  return kind == Kind::kUniform ? rng.uniform(a, b) : a + b * rng.normal();
}

SyntheticBook generate(const SyntheticSpec& spec) {
  if (spec.students < 1 || spec.courses < 1) throw UsageError("need at least one student and course");
  if (spec.min_per_student < 1 || spec.min_per_student > spec.max_per_student) {
    throw UsageError("per-student course counts must satisfy 1 <= min <= max");
  }
  if (spec.max_per_student > spec.courses) {
    throw UsageError("infeasible spec: " + std::to_string(spec.max_per_student) +
                     " courses per student but only " + std::to_string(spec.courses) +
                     " courses offered");
  }
  if (!(spec.noise_sigma >= 0.0)) throw UsageError("noise sigma must be non-negative");
  if (spec.max_attempts < 1) throw UsageError("max_attempts must be positive");

  const int m = spec.students;
  const int n = spec.courses;
  Rng design(splitmix64(spec.seed));
  std::vector<double> mu(m), nu(n);
  for (auto& v : mu) v = spec.mu_dist.draw(design);
  for (auto& v : nu) v = spec.nu_dist.draw(design);

  // Per-student course lists, redrawn until the enrollment graph is connected.
  std::vector<std::vector<int>> schedule(m);
  std::vector<int> deck(n);
  bool connected = false;
  int attempt = 0;
  while (attempt < spec.max_attempts && !connected) {
    ++attempt;
    UnionFind forest(m + n);
    std::vector<char> used(n, 0);
    for (int i = 0; i < m; ++i) {
      const int span = spec.max_per_student - spec.min_per_student + 1;
      const int k = spec.min_per_student + static_cast<int>(design.below(span));
      std::iota(deck.begin(), deck.end(), 0);
      for (int s = 0; s < k; ++s) {
        const int pick = s + static_cast<int>(design.below(static_cast<std::uint64_t>(n - s)));
        std::swap(deck[s], deck[pick]);
      }
      schedule[i].assign(deck.begin(), deck.begin() + k);
      std::sort(schedule[i].begin(), schedule[i].end());
      for (int j : schedule[i]) {
        forest.unite(i, m + j);
        used[j] = 1;
      }
    }
    const int root = forest.find(0);
    connected = true;
    for (int i = 0; i < m && connected; ++i) connected = forest.find(i) == root;
    for (int j = 0; j < n && connected; ++j) connected = !used[j] || forest.find(m + j) == root;
  }

  // Re-center nu over the courses that actually appear.
  std::vector<char> used(n, 0);
  for (const auto& courses : schedule) {
    for (int j : courses) used[j] = 1;
  }
  double sum = 0.0;
  int present = 0;
  for (int j = 0; j < n; ++j) {
    if (used[j]) {
      sum += nu[j];
      ++present;
    }
  }
  const double shift = sum / present;
  for (auto& v : nu) v -= shift;

  Rng noise(splitmix64(spec.noise_seed.value_or(spec.seed) ^ 0x6A09E667F3BCC909ULL));
  const GradeScale ladder = GradeScale::standard();
  std::vector<GradeRecord> records;
  std::unordered_map<std::string, int> course_of_id;
  for (int i = 0; i < m; ++i) {
    const std::string sid = padded_id('s', i, m);
    for (int j : schedule[i]) {
      double grade = mu[i] + nu[j];
      if (spec.noise_sigma > 0.0) grade += spec.noise_sigma * noise.normal();
      if (spec.quantize) grade = nearest_rung(ladder, grade);
      std::string cid = padded_id('c', j, n);
      course_of_id.emplace(cid, j);
      records.push_back({sid, std::move(cid), grade});
    }
  }

  SyntheticBook out{GradeBook::build(std::move(records)), {}, connected, attempt};
  auto& truth = out.truth;
  truth.student_ids = out.book.student_ids();
  truth.course_ids = out.book.course_ids();
  truth.mu.assign(mu.begin(), mu.end());
  truth.nu.reserve(truth.course_ids.size());
  for (const auto& cid : truth.course_ids) truth.nu.push_back(nu[course_of_id.at(cid)]);
  return out;
}

double spearman_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) throw UsageError("rank correlation needs equal, non-empty inputs");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double mean = 0.5 * static_cast<double>(a.size() - 1);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (ra[k] - mean) * (rb[k] - mean);
    saa += (ra[k] - mean) * (ra[k] - mean);
    sbb += (rb[k] - mean) * (rb[k] - mean);
  }
  if (saa == 0.0 || sbb == 0.0) return ra == rb ? 1.0 : 0.0;
  return sab / std::sqrt(saa * sbb);
}

RecoveryMetrics recovery_metrics(const GradeBook& book, const GroundTruth& truth,
                                 const FitResult& fit) {
  const std::size_t m = book.num_students();
  const std::size_t n = book.num_courses();
  if (truth.mu.size() != m || truth.nu.size() != n || fit.mu.size() != m || fit.nu.size() != n) {
    throw DataError("truth, fit and book cover different entity sets");
  }
  // Align both onto the book's index order by id.
  std::vector<double> true_mu(m), true_nu(n), fit_mu(m), fit_nu(n);
  for (std::size_t k = 0; k < m; ++k) {
    const auto t = book.find_student(truth.student_ids[k]);
    const auto f = book.find_student(fit.student_ids[k]);
    if (!t || !f) throw DataError("student set mismatch at '" + truth.student_ids[k] + "'");
    true_mu[*t] = truth.mu[k];
    fit_mu[*f] = fit.mu[k];
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto t = book.find_course(truth.course_ids[k]);
    const auto f = book.find_course(fit.course_ids[k]);
    if (!t || !f) throw DataError("course set mismatch at '" + truth.course_ids[k] + "'");
    true_nu[*t] = truth.nu[k];
    fit_nu[*f] = fit.nu[k];
  }
  normalize_per_component(book, true_mu, true_nu);
  normalize_per_component(book, fit_mu, fit_nu);

  RecoveryMetrics out;
  double sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double err = std::abs(fit_mu[i] - true_mu[i]);
    sq += err * err;
    out.mu_max_error = std::max(out.mu_max_error, err);
  }
  out.mu_rmse = std::sqrt(sq / static_cast<double>(m));
  sq = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double err = std::abs(fit_nu[j] - true_nu[j]);
    sq += err * err;
    out.nu_max_error = std::max(out.nu_max_error, err);
  }
  out.nu_rmse = std::sqrt(sq / static_cast<double>(n));
  out.mu_rank_correlation = spearman_correlation(true_mu, fit_mu);
  return out;
}

}  // namespace gradefit
