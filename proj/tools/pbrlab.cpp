#include <iostream>

#include "pbrlab/cli.hpp"

int main(int argc, char** argv) { return pbrlab::cli::run(argc, argv, std::cout, std::cerr); }
