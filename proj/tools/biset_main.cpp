#include <iostream>

#include "biset/cli.hpp"

int main(int argc, char** argv) { return biset::cli::main(argc, argv, std::cout, std::cerr); }
