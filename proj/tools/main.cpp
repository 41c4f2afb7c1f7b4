#include <iostream>

#include "csikit_cli/app.hpp"

int main(int argc, char** argv) { return csikit::cli::run(argc, argv, std::cout, std::cerr); }
