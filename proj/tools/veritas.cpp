#include <iostream>

#include "veritas/cli/app.hpp"

int main(int argc, char** argv) { return veritas::cli::runCli(argc, argv, std::cout, std::cerr); }
