#include <iostream>
#include <string>
#include <vector>

#include "bayeslin/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return bayeslin::cli::run(args, std::cout);
}
