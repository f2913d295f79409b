#include <iostream>

#include "fracmaps/cli/experiments.hpp"

int main(int argc, char** argv) {
  return fracmaps::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
