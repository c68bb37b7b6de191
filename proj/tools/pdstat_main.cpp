#include <iostream>

#include "pdstat/cli.hpp"

int main(int argc, char** argv) {
  return pdstat::cli::run(argc, argv, std::cout, std::cerr);
}
