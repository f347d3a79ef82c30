#include <iostream>
#include <string>
#include <vector>

#include "deltab/cli_report.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return deltab::cli::run(args, std::cout, std::cerr);
}
