#include <iostream>

#include "minsub/cli.hpp"

int main(int argc, char** argv) { return minsub::cli::run(argc, argv, std::cout, std::cerr); }
