#include "twinarm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return twinarm::run_cli(argc, argv, std::cin, std::cout, std::cerr);
}
