#include <iostream>
#include <string>
#include <vector>

#include "detmatch/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return detmatch::cli::run(args, std::cerr);
}
