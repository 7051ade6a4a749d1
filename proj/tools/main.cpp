#include <iostream>

#include "ecdflab/cli.hpp"

int main(int argc, char** argv) {
    return ecdflab::run_cli(argc, argv, std::cout, std::cerr);
}
