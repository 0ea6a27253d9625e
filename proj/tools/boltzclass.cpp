#include <iostream>

#include "boltzclass/cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return boltzclass::run_cli(args, std::cout, std::cerr);
}
