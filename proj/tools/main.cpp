#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return monolab::cli::run(argc, argv, std::cout, std::cerr);
}
