#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gradefit/fit_result.hpp"
#include "gradefit/grade_scale.hpp"
#include "gradefit/gradebook.hpp"

namespace gradefit {

struct ParseOptions {
  // Reject numeric grades outside [scale min, scale max].
  bool strict_range = false;
};

/// Reads one "student course grade" record per non-empty line. Fields are
/// separated by whitespace or commas; '#' lines are comments. The grade is a
/// number or a letter looked up in `scale`. Errors carry the line number.
GradeBook parse_grade_records(std::istream& in, const GradeScale& scale,
                              const ParseOptions& options = {});
GradeBook parse_input_file(const std::string& path, const GradeScale& scale,
                           const ParseOptions& options = {});

/// Writes records in input order with round-trip exact grades.
void write_grade_records(const GradeBook& book, std::ostream& out);

struct ReportRow {
  std::string id;
  double estimate;
  double stderr_value;
  int count;
};

/// Courses by ascending nu, ties by id bytes. Rows with count < min_count are
/// dropped.
std::vector<ReportRow> course_report_rows(const FitResult& fit, int min_count = 0);
/// Students by descending mu, ties by id bytes.
std::vector<ReportRow> student_report_rows(const FitResult& fit, int min_count = 0);

/// "id  +0.84 ± 0.36      2": two decimals, never "-0.00". The sign is
/// forced for inflatedness-style values.
std::string format_report_row(const ReportRow& row, std::size_t id_width = 0,
                              bool show_sign = true);

/// Table-style reports with a '#' header carrying the fit diagnostics.
void write_course_report(const FitResult& fit, std::ostream& out, int min_count = 0);
void write_student_report(const FitResult& fit, std::ostream& out, int min_count = 0);

/// Header "entity_type,id,estimate,stderr,count", students then courses,
/// values printed with 17 significant digits.
void write_estimates_csv(const FitResult& fit, std::ostream& out);

struct EstimateRow {
  std::string entity_type;
  std::string id;
  double estimate;
  double stderr_value;
  int count;
};

std::vector<EstimateRow> read_estimates_csv(std::istream& in);

}  // namespace gradefit
