#include <iostream>

#include "cli.h"

int main(int argc, char** argv) { return critnet::Run(argc, argv, std::cout, std::cerr); }
