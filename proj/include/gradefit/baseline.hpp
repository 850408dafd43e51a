#pragma once

#include <string_view>

#include "gradefit/gradebook.hpp"

namespace gradefit {

// Plain grade-point average: the least-squares fit of X_ij = mu_i + e_ij.
double gpa(const GradeBook& book, std::string_view student);
double gpa(const GradeBook& book, int student);

// Course mean grade: the least-squares fit of X_ij = nu_j + e_ij.
double course_average(const GradeBook& book, std::string_view course);
double course_average(const GradeBook& book, int course);

}  // namespace gradefit
