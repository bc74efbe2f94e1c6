#include <iostream>

#include "tfloc/cli.hpp"

int main(int argc, char** argv) {
  return tfloc::run_cli(argc, argv, std::cout, std::cerr);
}
