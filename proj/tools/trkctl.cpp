#include <iostream>
#include <string>
#include <vector>

#include "trk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return trk::cli::run(args, std::cout, std::cerr);
}
