#include "gradefit/components.hpp"

#include <numeric>
#include <utility>

namespace gradefit {

UnionFind::UnionFind(int size) : parent_(size), size_(size, 1) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int UnionFind::find(int x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(int x, int y) {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (size_[x] < size_[y]) std::swap(x, y);
  parent_[y] = x;
  size_[x] += size_[y];
  return true;
}

ComponentLabeling connected_components(const GradeBook& book) {
  const int m = static_cast<int>(book.num_students());
  const int n = static_cast<int>(book.num_courses());
  // Students occupy [0, m), courses [m, m + n).
  UnionFind forest(m + n);
  for (const auto& e : book.enrollments()) forest.unite(e.student, m + e.course);

  ComponentLabeling labels;
  labels.student_component.assign(m, -1);
  labels.course_component.assign(n, -1);
  std::vector<int> root_label(m + n, -1);
  auto label_of = [&](int node) {
    int& label = root_label[forest.find(node)];
    if (label < 0) label = labels.count++;
    return label;
  };
  for (const auto& e : book.enrollments()) {
    if (labels.student_component[e.student] < 0) {
      labels.student_component[e.student] = label_of(e.student);
    }
    if (labels.course_component[e.course] < 0) {
      labels.course_component[e.course] = label_of(m + e.course);
    }
  }
  return labels;
}

}  // namespace gradefit
