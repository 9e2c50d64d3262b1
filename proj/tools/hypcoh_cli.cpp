#include <iostream>

#include "hypcoh/cli.hpp"

int main(int argc, char** argv) { return hypcoh::run_cli(argc, argv, std::cout, std::cerr); }
