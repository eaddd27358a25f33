#include <iostream>

#include "nprev/cli.hpp"

int main(int argc, char** argv) { return nprev::run_cli(argc, argv, std::cout, std::cerr); }
