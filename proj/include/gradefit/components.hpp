#pragma once

#include <vector>

#include "gradefit/gradebook.hpp"

namespace gradefit {

// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(int size);

  int find(int x);
  // Returns false if x and y were already joined.
  bool unite(int x, int y);

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

/// Connected components of the student/course bipartite graph.
struct ComponentLabeling {
  std::vector<int> student_component;
  std::vector<int> course_component;
  int count = 0;

  bool connected() const { return count == 1; }
};

/// Labels are assigned in order of first appearance while scanning records.
ComponentLabeling connected_components(const GradeBook& book);

}  // namespace gradefit
