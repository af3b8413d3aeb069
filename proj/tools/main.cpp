#include <iostream>
#include <string>
#include <vector>

#include "modagg/cli_driver.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return modagg::run_cli(args, std::cout, std::cerr);
}
