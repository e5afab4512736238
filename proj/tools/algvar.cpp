#include <iostream>

#include "algvar/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return algvar::cli::dispatch(args, std::cout, std::cerr);
}
