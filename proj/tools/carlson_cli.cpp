#include <iostream>

#include "carlson/harness.hpp"

int main(int argc, char** argv) { return carlson::run_cli(argc, argv, std::cout, std::cerr); }
