#include <iostream>

#include "qualimeter/cli.hpp"

int main(int argc, char** argv) { return qualimeter::main_entry(argc, argv, std::cout, std::cerr); }
