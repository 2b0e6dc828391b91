#include <iostream>

#include "spinsteer/cli.h"

int main(int argc, char** argv) { return spinsteer::run_cli(argc, argv, std::cout, std::cerr); }
