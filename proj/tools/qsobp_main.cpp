#include <iostream>
#include <string>
#include <vector>

#include "qsobp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return qsobp::cli::run(args, std::cout, std::cerr);
}
