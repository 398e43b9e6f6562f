#include <iostream>

#include "blt/cli.hpp"

int main(int argc, char** argv) { return blt::cli::run(argc, argv, std::cout, std::cerr); }
