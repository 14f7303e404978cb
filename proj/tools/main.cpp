#include <iostream>

#include "lattrans/cli.hpp"

int main(int argc, char** argv) { return lattrans::run_cli(argc, argv, std::cout, std::cerr); }
