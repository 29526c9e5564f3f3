#include <iostream>

#include "crawlcount/cli.hpp"

int main(int argc, char** argv) { return crawlcount::cli::run(argc, argv, std::cout, std::cerr); }
