#include <iostream>
#include <string>
#include <vector>

#include "zmest/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return zmest::run_cli(args, std::cout, std::cerr);
}
