#include <iostream>

#include "ubmot/cli.hpp"

int main(int argc, char** argv) { return ubmot::cli::run(argc, argv, std::cout, std::cerr); }
