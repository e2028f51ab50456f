#include <iostream>

#include "cdp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cdp::run_cli(args, std::cout, std::cerr);
}
