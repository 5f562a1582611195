#include <iostream>
#include <string>
#include <vector>

#include "nichols/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return nichols::dispatch(args, std::cout, std::cerr);
}
