#include <iostream>
#include <string>
#include <vector>

#include "aegan/cli.hpp"

int main(int argc, char** argv) {
  return aegan::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
