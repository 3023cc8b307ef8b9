#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return cusum_lp::cli::run(argc, argv, std::cout, std::cerr); }
