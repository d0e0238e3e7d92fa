#include <iostream>

#include "randcompare_cli/cli.hpp"

int main(int argc, char** argv) {
  return randcompare::cli::run(argc, argv, std::cout, std::cerr);
}
