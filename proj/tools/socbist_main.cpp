// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "socbist/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return socbist::run(args, std::cout, std::cerr);
}
