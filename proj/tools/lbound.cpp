#include <iostream>
#include <string>
#include <vector>

#include "langevin_bounds/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return lbound::cli::run(args, std::cout, std::cerr);
}
