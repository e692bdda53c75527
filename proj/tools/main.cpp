#include "induced/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return induced::cli::run(argc, argv, std::cout, std::cerr);
}
