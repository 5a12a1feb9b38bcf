#include <iostream>

#include "conformable/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return conformable::cli::run(args, std::cout, std::cerr);
}
