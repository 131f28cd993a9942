#include <iostream>

#include "pfreq/cli.hpp"

int main(int argc, char** argv) { return pfreq::run_cli(argc, argv, std::cout, std::cerr); }
