#include <iostream>

#include "gecdq/cli.hpp"

int main(int argc, char** argv) { return gecdq::cli::run(argc, argv, std::cout, std::cerr); }
