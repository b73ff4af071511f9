#include <iostream>

#include "prizes/cli_io.hpp"

int main(int argc, char** argv) { return prizes::run_cli(argc, argv, std::cout, std::cerr); }
