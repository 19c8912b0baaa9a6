#include <iostream>

#include "capbody/cli_commands.hpp"

int main(int argc, char** argv) {
  return capbody::run_cli(argc, argv, std::cout, std::cerr);
}
