#include "gradefit/grade_scale.hpp"

#include <fstream>
#include <sstream>

#include "gradefit/error.hpp"

namespace gradefit {
namespace {

std::string normalize_letter(std::string_view letter) {
  // U+2212 MINUS SIGN in UTF-8.
  constexpr std::string_view kMinus = "\xE2\x88\x92";
  std::string out(letter);
  for (std::size_t pos = out.find(kMinus); pos != std::string::npos; pos = out.find(kMinus)) {
    out.replace(pos, kMinus.size(), "-");
  }
  return out;
}

}  // namespace

GradeScale::GradeScale(std::vector<LetterGrade> ladder,
                       std::vector<std::pair<std::string, std::string>> aliases)
    : ladder_(std::move(ladder)) {
  if (ladder_.empty()) throw DataError("grade scale is empty");
  for (auto& rung : ladder_) rung.letter = normalize_letter(rung.letter);
  for (std::size_t i = 0; i < ladder_.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (ladder_[k].letter == ladder_[i].letter) {
        throw DataError("grade scale repeats letter '" + ladder_[i].letter + "'");
      }
    }
    if (i > 0 && !(ladder_[i].points < ladder_[i - 1].points)) {
      throw DataError("grade scale points must strictly decrease at '" + ladder_[i].letter + "'");
    }
  }
  for (const auto& [alias, target] : aliases) {
    auto points = lookup(target);
    if (!points) throw DataError("alias '" + alias + "' names unknown letter '" + target + "'");
    if (lookup(alias)) throw DataError("alias '" + alias + "' shadows an existing letter");
    aliases_.emplace_back(normalize_letter(alias), *points);
  }
}

GradeScale GradeScale::standard() {
  return GradeScale({{"A", 4.0},
                     {"A-", 3.7},
                     {"B+", 3.3},
                     {"B", 3.0},
                     {"B-", 2.7},
                     {"C+", 2.3},
                     {"C", 2.0},
                     {"C-", 1.7},
                     {"D+", 1.3},
                     {"D", 1.0},
                     {"D-", 0.7},
                     {"F", 0.0}},
                    {{"A+", "A"}});
}

GradeScale GradeScale::thirds() {
  return GradeScale({{"A", 4.0},
                     {"A-", 11.0 / 3.0},
                     {"B+", 10.0 / 3.0},
                     {"B", 3.0},
                     {"B-", 8.0 / 3.0},
                     {"C+", 7.0 / 3.0},
                     {"C", 2.0},
                     {"C-", 5.0 / 3.0},
                     {"D+", 4.0 / 3.0},
                     {"D", 1.0},
                     {"D-", 2.0 / 3.0},
                     {"F", 0.0}},
                    {{"A+", "A"}});
}

GradeScale GradeScale::parse(std::istream& in) {
  std::vector<LetterGrade> ladder;
  std::vector<std::pair<std::string, std::string>> aliases;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string letter, second, third;
    if (!(fields >> letter)) continue;
    if (!(fields >> second)) throw ParseError(line_no, "expected 'LETTER POINTS'");
    if (second == "=") {
      if (!(fields >> third)) throw ParseError(line_no, "expected 'ALIAS = LETTER'");
      aliases.emplace_back(letter, third);
      continue;
    }
    double points = 0.0;
    try {
      std::size_t used = 0;
      points = std::stod(second, &used);
      if (used != second.size()) throw std::invalid_argument(second);
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad points value '" + second + "'");
    }
    if (fields >> third) throw ParseError(line_no, "unexpected token '" + third + "'");
    ladder.push_back({letter, points});
  }
  return GradeScale(std::move(ladder), std::move(aliases));
}

GradeScale GradeScale::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open grade scale '" + path + "'");
  return parse(in);
}

std::optional<double> GradeScale::lookup(std::string_view letter) const {
  const std::string key = normalize_letter(letter);
  for (const auto& rung : ladder_) {
    if (rung.letter == key) return rung.points;
  }
  for (const auto& [alias, points] : aliases_) {
    if (alias == key) return points;
  }
  return std::nullopt;
}

}  // namespace gradefit
