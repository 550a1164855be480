#include <iostream>

#include "pacconf/cli.hpp"

int main(int argc, char** argv) { return pacconf::run_cli(argc, argv, std::cout, std::cerr); }
