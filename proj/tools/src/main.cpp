#include <iostream>

#include "gasnet/cli.hpp"

int main(int argc, char** argv) { return gasnet::run_cli(argc, argv, std::cout, std::cerr); }
