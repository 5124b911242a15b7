#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return kmscli::run(argc, argv, std::cout, std::cerr); }
