#include <iostream>
#include <string>
#include <vector>

#include "qh/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qh::dispatch(args, std::cout, std::cerr);
}
