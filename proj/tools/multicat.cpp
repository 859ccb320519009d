#include <iostream>

#include "multicat/cli.hpp"

int main(int argc, char** argv) { return multicat::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
