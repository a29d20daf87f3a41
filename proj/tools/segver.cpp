#include <iostream>
#include <string>
#include <vector>

#include "segver/job.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return segver::run_cli(args, std::cout, std::cerr);
}
