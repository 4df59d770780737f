#include "accel/harness.hpp"

#include <iostream>

int main(int argc, char** argv) { return accel::cli_main(argc, argv, std::cout, std::cerr); }
