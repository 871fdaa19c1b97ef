#include <iostream>

#include "evigen/cli.hpp"

int main(int argc, char** argv) {
  return evigen::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
