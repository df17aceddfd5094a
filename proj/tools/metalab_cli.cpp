#include <iostream>
#include <string>
#include <vector>

#include "metalab/cli.hpp"

int main(int argc, char** argv) {
  return metalab::cli::dispatch(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
