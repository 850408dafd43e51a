#include "gradefit/gradebook.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>

#include "gradefit/error.hpp"

namespace gradefit {
namespace {

// Counting sort of record indices by key into CSR form.
void bucket(const std::vector<int>& keys, int num_keys, std::vector<int>& offsets,
            std::vector<int>& index) {
  offsets.assign(num_keys + 1, 0);
  for (int key : keys) ++offsets[key + 1];
  for (int k = 0; k < num_keys; ++k) offsets[k + 1] += offsets[k];
  index.resize(keys.size());
  std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t r = 0; r < keys.size(); ++r) index[cursor[keys[r]]++] = static_cast<int>(r);
}

}  // namespace

GradeBook GradeBook::build(std::vector<GradeRecord> records) {
  if (records.empty()) throw DataError("empty input: no grade records");

  GradeBook book;
  book.enrollments_.reserve(records.size());
  std::unordered_set<std::uint64_t> seen_pairs;
  seen_pairs.reserve(records.size());

  for (const auto& rec : records) {
    if (!std::isfinite(rec.grade)) {
      throw DataError("non-finite grade for (" + rec.student + ", " + rec.course + ")");
    }
    auto [sit, snew] = book.student_lookup_.try_emplace(
        rec.student, static_cast<int>(book.student_ids_.size()));
    if (snew) book.student_ids_.push_back(rec.student);
    auto [cit, cnew] = book.course_lookup_.try_emplace(
        rec.course, static_cast<int>(book.course_ids_.size()));
    if (cnew) book.course_ids_.push_back(rec.course);

    const auto pair_key = (static_cast<std::uint64_t>(sit->second) << 32) |
                          static_cast<std::uint32_t>(cit->second);
    if (!seen_pairs.insert(pair_key).second) {
      throw DataError("duplicate record for student '" + rec.student + "' in course '" +
                      rec.course + "'");
    }
    book.enrollments_.push_back({sit->second, cit->second, rec.grade});
  }
  book.records_ = std::move(records);

  std::vector<int> keys(book.enrollments_.size());
  for (std::size_t r = 0; r < keys.size(); ++r) keys[r] = book.enrollments_[r].student;
  bucket(keys, static_cast<int>(book.num_students()), book.student_offsets_, book.student_index_);
  for (std::size_t r = 0; r < keys.size(); ++r) keys[r] = book.enrollments_[r].course;
  bucket(keys, static_cast<int>(book.num_courses()), book.course_offsets_, book.course_index_);
  return book;
}

std::optional<int> GradeBook::find_student(std::string_view id) const {
  auto it = student_lookup_.find(std::string(id));
  if (it == student_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> GradeBook::find_course(std::string_view id) const {
  auto it = course_lookup_.find(std::string(id));
  if (it == course_lookup_.end()) return std::nullopt;
  return it->second;
}

int GradeBook::student_index(std::string_view id) const {
  if (auto i = find_student(id)) return *i;
  throw DataError("unknown student '" + std::string(id) + "'");
}

int GradeBook::course_index(std::string_view id) const {
  if (auto j = find_course(id)) return *j;
  throw DataError("unknown course '" + std::string(id) + "'");
}

std::span<const int> GradeBook::student_records(int student) const {
  return {student_index_.data() + student_offsets_[student],
          static_cast<std::size_t>(student_offsets_[student + 1] - student_offsets_[student])};
}

std::span<const int> GradeBook::course_records(int course) const {
  return {course_index_.data() + course_offsets_[course],
          static_cast<std::size_t>(course_offsets_[course + 1] - course_offsets_[course])};
}

int GradeBook::student_count(int student) const {
  return student_offsets_[student + 1] - student_offsets_[student];
}

int GradeBook::course_count(int course) const {
  return course_offsets_[course + 1] - course_offsets_[course];
}

std::vector<int> GradeBook::student_counts() const {
  std::vector<int> counts(num_students());
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = student_count(static_cast<int>(i));
  return counts;
}

std::vector<int> GradeBook::course_counts() const {
  std::vector<int> counts(num_courses());
  for (std::size_t j = 0; j < counts.size(); ++j) counts[j] = course_count(static_cast<int>(j));
  return counts;
}

}  // namespace gradefit
