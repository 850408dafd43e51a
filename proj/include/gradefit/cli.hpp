#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gradefit::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kSolverError = 3,
};

// Entry point shared by the gradefit binary and the tests. args excludes the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gradefit::cli
