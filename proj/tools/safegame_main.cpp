#include <iostream>

#include "safegame/cli.hpp"

int main(int argc, char** argv) { return safegame::runCli(argc, argv, std::cout, std::cerr); }
