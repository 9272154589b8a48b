#include <iostream>

#include "opera_cli.hpp"

int main(int argc, char** argv) { return opera::cli::run(argc, argv, std::cout, std::cerr); }
