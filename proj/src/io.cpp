#include "gradefit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gradefit/error.hpp"

namespace gradefit {
namespace {

bool is_space(char ch) { return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '\v' || ch == '\f'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Splits on commas when the line has any, otherwise on whitespace runs.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  if (line.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(trim(line.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return fields;
  }
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && is_space(line[k])) ++k;
    const std::size_t start = k;
    while (k < line.size() && !is_space(line[k])) ++k;
    if (k > start) fields.push_back(line.substr(start, k - start));
  }
  return fields;
}

std::optional<double> parse_number(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

std::string shortest(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void check_token(const std::string& id, const char* what) {
  const bool bad = id.empty() || id.front() == '#' ||
                   std::any_of(id.begin(), id.end(), [](char ch) { return is_space(ch) || ch == ','; });
  if (bad) throw DataError(std::string(what) + " id '" + id + "' cannot be written as a record token");
}

std::string two_decimals(double value, bool show_sign) {
  double rounded = std::round(value * 100.0) / 100.0;
  if (rounded == 0.0) rounded = 0.0;  // drops the sign of -0.0
  char buf[64];
  std::snprintf(buf, sizeof buf, show_sign ? "%+.2f" : "%.2f", rounded);
  return buf;
}

std::vector<ReportRow> rows_for(const std::vector<std::string>& ids, const std::vector<double>& est,
                                const std::vector<double>& err, const std::vector<int>& counts,
                                int min_count) {
  std::vector<ReportRow> rows;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (counts[k] < min_count) continue;
    rows.push_back({ids[k], est[k], err[k], counts[k]});
  }
  return rows;
}

void write_header(const FitResult& fit, std::ostream& out, const char* title) {
  out << "# " << title << " (" << method_name(fit.method) << ")\n";
  out << "# objective " << shortest(fit.objective) << ", scale " << two_decimals(fit.scale, false)
      << ", iterations " << fit.iterations << ", status " << fit.solver_status << '\n';
  if (fit.method == Method::kLadLp || fit.method == Method::kLadAlternating) {
    out << "# error bars use a heuristic scale: root mean squared residual at the LAD fit\n";
  }
  if (fit.disconnected()) {
    out << "# warning: data has " << fit.components
        << " connected components; estimates compare only within a component\n";
  }
}

void write_rows(const std::vector<ReportRow>& rows, std::ostream& out, bool show_sign) {
  std::size_t width = 0;
  for (const auto& row : rows) width = std::max(width, row.id.size());
  for (const auto& row : rows) out << format_report_row(row, width, show_sign) << '\n';
}

}  // namespace

GradeBook parse_grade_records(std::istream& in, const GradeScale& scale,
                              const ParseOptions& options) {
  std::vector<GradeRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto fields = split_fields(content);
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 3 fields (student, course, grade), found " +
                                    std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) throw ParseError(line_no, "empty id field");
    double grade = 0.0;
    if (auto number = parse_number(fields[2])) {
      if (!std::isfinite(*number)) {
        throw ParseError(line_no, "grade '" + std::string(fields[2]) + "' is not finite");
      }
      grade = *number;
      if (options.strict_range && (grade < scale.min_points() || grade > scale.max_points())) {
        throw ParseError(line_no, "grade '" + std::string(fields[2]) + "' outside scale range");
      }
    } else if (auto points = scale.lookup(fields[2])) {
      grade = *points;
    } else {
      throw ParseError(line_no, "bad grade '" + std::string(fields[2]) + "'");
    }
    records.push_back({std::string(fields[0]), std::string(fields[1]), grade});
  }
  return GradeBook::build(std::move(records));
}

GradeBook parse_input_file(const std::string& path, const GradeScale& scale,
                           const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input '" + path + "'");
  return parse_grade_records(in, scale, options);
}

void write_grade_records(const GradeBook& book, std::ostream& out) {
  for (const auto& rec : book.records()) {
    check_token(rec.student, "student");
    check_token(rec.course, "course");
    out << rec.student << ' ' << rec.course << ' ' << shortest(rec.grade) << '\n';
  }
}

std::vector<ReportRow> course_report_rows(const FitResult& fit, int min_count) {
  auto rows = rows_for(fit.course_ids, fit.nu, fit.stderr_nu, fit.course_counts, min_count);
  std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.estimate != b.estimate) return a.estimate < b.estimate;
    return a.id < b.id;
  });
  return rows;
}

std::vector<ReportRow> student_report_rows(const FitResult& fit, int min_count) {
  auto rows = rows_for(fit.student_ids, fit.mu, fit.stderr_mu, fit.student_counts, min_count);
  std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.estimate != b.estimate) return a.estimate > b.estimate;
    return a.id < b.id;
  });
  return rows;
}

std::string format_report_row(const ReportRow& row, std::size_t id_width, bool show_sign) {
  std::string out = row.id;
  if (out.size() < id_width) out.append(id_width - out.size(), ' ');
  char count[32];
  std::snprintf(count, sizeof count, "%5d", row.count);
  out += "  " + two_decimals(row.estimate, show_sign) + " ± " +
         two_decimals(row.stderr_value, false) + "  " + count;
  return out;
}

void write_course_report(const FitResult& fit, std::ostream& out, int min_count) {
  write_header(fit, out, "course inflatedness, least inflated first");
  write_rows(course_report_rows(fit, min_count), out, true);
}

void write_student_report(const FitResult& fit, std::ostream& out, int min_count) {
  write_header(fit, out, "student aptitude, highest first");
  write_rows(student_report_rows(fit, min_count), out, false);
}

void write_estimates_csv(const FitResult& fit, std::ostream& out) {
  out << "entity_type,id,estimate,stderr,count\n";
  for (std::size_t i = 0; i < fit.student_ids.size(); ++i) {
    out << "student," << fit.student_ids[i] << ',' << shortest(fit.mu[i]) << ','
        << shortest(fit.stderr_mu[i]) << ',' << fit.student_counts[i] << '\n';
  }
  for (std::size_t j = 0; j < fit.course_ids.size(); ++j) {
    out << "course," << fit.course_ids[j] << ',' << shortest(fit.nu[j]) << ','
        << shortest(fit.stderr_nu[j]) << ',' << fit.course_counts[j] << '\n';
  }
}

std::vector<EstimateRow> read_estimates_csv(std::istream& in) {
  std::vector<EstimateRow> rows;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || trim(line) != "entity_type,id,estimate,stderr,count") {
    throw ParseError(1, "missing estimates header");
  }
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(trim(line));
    if (fields.size() != 5) throw ParseError(line_no, "expected 5 fields");
    const auto estimate = parse_number(fields[2]);
    const auto stderr_value = parse_number(fields[3]);
    int count = 0;
    const auto [ptr, ec] = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), count);
    if (!estimate || !stderr_value || ec != std::errc() || ptr != fields[4].data() + fields[4].size()) {
      throw ParseError(line_no, "bad numeric field");
    }
    if (fields[0] != "student" && fields[0] != "course") {
      throw ParseError(line_no, "unknown entity type '" + std::string(fields[0]) + "'");
    }
    rows.push_back({std::string(fields[0]), std::string(fields[1]), *estimate, *stderr_value, count});
  }
  return rows;
}

}  // namespace gradefit
