#include <iostream>

#include "ltlab/cli.hpp"

int main(int argc, char** argv) { return ltlab::run(argc, argv, std::cout, std::cerr); }
