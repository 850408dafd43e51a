#include <iostream>
#include <string>
#include <vector>

#include "gradefit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gradefit::cli::run(args, std::cout, std::cerr);
}
