#include <iostream>

#include "tfsim/cli.hpp"

int main(int argc, char** argv) { return tfsim::run_cli(argc, argv, std::cout, std::cerr); }
