#include <iostream>
#include <string>
#include <vector>

#include "autohedge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return autohedge::run_command(args, std::cout, std::cerr);
}
