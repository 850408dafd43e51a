#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gradefit {

struct LetterGrade {
  std::string letter;
  double points;
};

/// Mapping from letter grades to grade points.
///
/// The ladder is ordered best to worst with strictly decreasing points.
/// Aliases (for example "A+" on a ladder that tops out at 4.0) resolve to an
/// existing rung's points without being part of the ordering.
class GradeScale {
 public:
  explicit GradeScale(std::vector<LetterGrade> ladder,
                      std::vector<std::pair<std::string, std::string>> aliases = {});

  /// A 4.0 .. 0.0 ladder with +/- steps of 0.3/0.7 and A+ aliased to A.
  static GradeScale standard();

  /// Same letters as standard() but with +/- at exact thirds (A- = 11/3).
  static GradeScale thirds();

  /// Reads "LETTER POINTS" lines, best grade first. '#' starts a comment.
  /// "ALIAS = LETTER" lines declare aliases.
  static GradeScale parse(std::istream& in);
  static GradeScale load(const std::string& path);

  /// Resolves a letter (or alias). Accepts U+2212 in place of '-'.
  std::optional<double> lookup(std::string_view letter) const;

  const std::vector<LetterGrade>& ladder() const { return ladder_; }
  double max_points() const { return ladder_.front().points; }
  double min_points() const { return ladder_.back().points; }

 private:
  std::vector<LetterGrade> ladder_;
  std::vector<std::pair<std::string, double>> aliases_;
};

}  // namespace gradefit
