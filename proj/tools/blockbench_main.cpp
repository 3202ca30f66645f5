#include <iostream>

#include "blockbench/cli.hpp"

int main(int argc, char** argv) { return blockbench::run_cli(argc, argv, std::cout, std::cerr); }
