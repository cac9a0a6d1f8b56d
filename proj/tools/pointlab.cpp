#include <iostream>

#include "pointlab/cli.hpp"

int main(int argc, char** argv) { return pointlab::cli::run(argc, argv, std::cout, std::cerr); }
