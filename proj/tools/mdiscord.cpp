#include <iostream>
#include <string>
#include <vector>

#include "mdiscord/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mdiscord::run_cli(args, std::cout, std::cerr);
}
