#include <iostream>
#include <string>
#include <vector>

#include "contcount/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return contcount::RunCli(args, std::cout, std::cerr);
}
