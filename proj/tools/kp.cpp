#include <iostream>
#include <string>
#include <vector>

#include "kp/cli.hpp"

int main(int argc, char** argv) {
  return kp::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
