#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return converse_kit::cli::run(argc, argv, std::cout, std::cerr); }
