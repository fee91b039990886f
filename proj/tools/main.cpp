#include <iostream>

#include "minharm/experiments.hpp"

int main(int argc, char** argv) {
  return minharm::run_cli(argc, argv, std::cout, std::cerr);
}
