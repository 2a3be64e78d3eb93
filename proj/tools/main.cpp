#include <iostream>
#include <string>
#include <vector>

#include "dtnn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dtnn::cli::run(args, std::cerr);
}
