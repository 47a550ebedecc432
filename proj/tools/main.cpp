#include <iostream>

#include "stelim/cli.hpp"

int main(int argc, char **argv) { return stelim::run_cli(argc, argv, std::cout, std::cerr); }
