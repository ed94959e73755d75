#include <iostream>

#include "confbvp/cli/runner.hpp"

int main(int argc, char** argv) { return confbvp::cli::main_entry(argc, argv, std::cout, std::cerr); }
