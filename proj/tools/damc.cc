#include <iostream>
#include <string>
#include <vector>

#include "dam/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dam::cli::run(args, std::cout, std::cerr);
}
