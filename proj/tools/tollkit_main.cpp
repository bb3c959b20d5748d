#include <iostream>

#include "tollkit/cli.hpp"

int main(int argc, char** argv) { return tollkit::run_cli(argc, argv, std::cout, std::cerr); }
