#include <iostream>
#include <string>
#include <vector>

#include "sprefql/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return sprefql::run_cli(args, std::cout, std::cerr);
}
