#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  return lissajous::cli::run_cli(args, std::cin, std::cout, std::cerr);
}
