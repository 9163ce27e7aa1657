#include <iostream>

#include "qht/cli.hpp"

int main(int argc, char** argv) { return qht::run_cli(argc, argv, std::cout, std::cerr); }
