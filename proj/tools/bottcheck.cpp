#include "bott/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bott::cli::run(argc, argv, std::cout, std::cerr); }
