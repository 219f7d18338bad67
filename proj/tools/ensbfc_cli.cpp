#include <iostream>

#include "ensbfc/cli.hpp"

int main(int argc, char** argv) { return ensbfc::run_cli(argc, argv, std::cout, std::cerr); }
