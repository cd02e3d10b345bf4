#include <iostream>

#include "morpho/cli.hpp"

int main(int argc, char** argv) {
  return morpho::cli_main(std::vector<std::string>(argv + 1, argv + argc), std::cout,
                          std::cerr);
}
