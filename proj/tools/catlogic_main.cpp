#include "catlogic/cli.hpp"

#include <iostream>
#include <vector>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return catlogic::run_cli(args, std::cout, std::cerr);
}
