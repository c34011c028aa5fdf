#include <iostream>
#include <string>
#include <vector>

#include "rdc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rdc::cli::run(args, std::cout, std::cerr);
}
