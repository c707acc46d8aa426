#include <iostream>

#include "otto/cli.hpp"

int main(int argc, char** argv) { return otto::cli::main(argc, argv, std::cout, std::cerr); }
