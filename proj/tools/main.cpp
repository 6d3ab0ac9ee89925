#include <iostream>

#include "pinball/cli.hpp"

int main(int argc, char** argv) { return pinball::cli::run(argc, argv, std::cout, std::cerr); }
