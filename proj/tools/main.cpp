#include <iostream>

#include "snlp/cli.hpp"

int main(int argc, char** argv) { return snlp::run_cli(argc, argv, std::cout, std::cerr); }
