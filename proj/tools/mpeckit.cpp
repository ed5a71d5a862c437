#include <iostream>
#include <string>
#include <vector>

#include "mpeckit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return mpeckit::run_cli(args, std::cout, std::cerr);
}
