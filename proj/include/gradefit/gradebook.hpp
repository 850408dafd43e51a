#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gradefit {

struct GradeRecord {
  std::string student;
  std::string course;
  double grade;

  bool operator==(const GradeRecord&) const = default;
};

// A record with ids replaced by dense indices.
struct Enrollment {
  int student;
  int course;
  double grade;
};

/// Immutable sparse bipartite set of (student, course, grade) records.
///
/// Students and courses are numbered in order of first appearance. Records
/// keep their input order; per-student and per-course record lists are stored
/// in compressed form.
class GradeBook {
 public:
  /// Throws DataError on empty input, a repeated (student, course) pair or a
  /// non-finite grade.
  static GradeBook build(std::vector<GradeRecord> records);

  std::size_t num_students() const { return student_ids_.size(); }
  std::size_t num_courses() const { return course_ids_.size(); }
  std::size_t num_records() const { return enrollments_.size(); }

  const std::vector<GradeRecord>& records() const { return records_; }
  const std::vector<Enrollment>& enrollments() const { return enrollments_; }
  const std::vector<std::string>& student_ids() const { return student_ids_; }
  const std::vector<std::string>& course_ids() const { return course_ids_; }

  std::optional<int> find_student(std::string_view id) const;
  std::optional<int> find_course(std::string_view id) const;
  /// Throws DataError for an unknown id.
  int student_index(std::string_view id) const;
  int course_index(std::string_view id) const;

  /// Indices into enrollments() of the records of student i (the set J_i).
  std::span<const int> student_records(int student) const;
  /// Indices into enrollments() of the records of course j (the set I_j).
  std::span<const int> course_records(int course) const;

  int student_count(int student) const;  // n_i
  int course_count(int course) const;    // m_j
  std::vector<int> student_counts() const;
  std::vector<int> course_counts() const;

  /// True when every student took every course.
  bool is_complete() const { return num_records() == num_students() * num_courses(); }

 private:
  GradeBook() = default;

  std::vector<GradeRecord> records_;
  std::vector<Enrollment> enrollments_;
  std::vector<std::string> student_ids_;
  std::vector<std::string> course_ids_;
  std::unordered_map<std::string, int> student_lookup_;
  std::unordered_map<std::string, int> course_lookup_;
  std::vector<int> student_offsets_;
  std::vector<int> student_index_;
  std::vector<int> course_offsets_;
  std::vector<int> course_index_;
};

inline GradeBook build_gradebook(std::vector<GradeRecord> records) {
  return GradeBook::build(std::move(records));
}

}  // namespace gradefit
