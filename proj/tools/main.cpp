#include <iostream>

#include "sensemake/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sensemake::cli_dispatch(args, std::cout, std::cerr);
}
