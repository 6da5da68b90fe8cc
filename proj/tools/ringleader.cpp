#include <iostream>

#include "ringleader/cli/commands.hpp"

int main(int argc, char** argv) { return ringleader::cli::main_entry(argc, argv, std::cout, std::cerr); }
