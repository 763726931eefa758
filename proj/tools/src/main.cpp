#include <iostream>

#include "utm_cli/commands.hpp"

int main(int argc, char** argv) { return utm::cli::cli_main(argc, argv, std::cout, std::cerr); }
