#include <iostream>

#include "cmkms/cli.hpp"

int main(int argc, char** argv) {
  return cmkms::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
