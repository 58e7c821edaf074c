#include <iostream>

#include "riesz_cli/cli.hpp"

int main(int argc, char** argv) { return riesz::cli::run(argc, argv, std::cout, std::cerr); }
