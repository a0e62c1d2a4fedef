#include "ssakit/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ssakit::main_entry(argc, argv, std::cout, std::cerr); }
