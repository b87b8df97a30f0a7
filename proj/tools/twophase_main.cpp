#include <iostream>

#include "twophase/cli.hpp"

int main(int argc, char** argv) {
  return twophase::cli::main_entry(argc, argv, std::cout, std::cerr);
}
