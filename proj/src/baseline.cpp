#include "gradefit/baseline.hpp"

namespace gradefit {

double gpa(const GradeBook& book, int student) {
  double sum = 0.0;
  auto records = book.student_records(student);
  for (int r : records) sum += book.enrollments()[r].grade;
  return sum / static_cast<double>(records.size());
}

double gpa(const GradeBook& book, std::string_view student) {
  return gpa(book, book.student_index(student));
}

double course_average(const GradeBook& book, int course) {
  double sum = 0.0;
  auto records = book.course_records(course);
  for (int r : records) sum += book.enrollments()[r].grade;
  return sum / static_cast<double>(records.size());
}

double course_average(const GradeBook& book, std::string_view course) {
  return course_average(book, book.course_index(course));
}

}  // namespace gradefit
