#include <iostream>

#include "hafelm/cli.hpp"

int main(int argc, char** argv) { return hafelm::cli::run(argc, argv, std::cout, std::cerr); }
