#include <iostream>

#include "gobsec/cli.hpp"

int main(int argc, char** argv) { return gobsec::run_cli(argc, argv, std::cout, std::cerr); }
