#include <iostream>

#include "friedrichs/cli.hpp"

int main(int argc, char** argv) { return friedrichs::run_cli(argc, argv, std::cout, std::cerr); }
