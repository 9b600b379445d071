#include <iostream>

#include "sswalk/cli.hpp"

int main(int argc, char** argv) { return sswalk::run_cli(argc, argv, std::cout, std::cerr); }
