#include <iostream>

#include "despeckle/cli.hpp"

int main(int argc, char** argv) { return despeckle::cli::dispatch(argc, argv, std::cout, std::cerr); }
