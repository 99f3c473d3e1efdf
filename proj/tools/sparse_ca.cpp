#include <iostream>

#include "sparseca/cli.hpp"

int main(int argc, char** argv) { return sparseca::cli::run(argc, argv, std::cout, std::cerr); }
