#include <iostream>

#include "cognilog/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cognilog::cli::run(args, std::cout, std::cerr);
}
