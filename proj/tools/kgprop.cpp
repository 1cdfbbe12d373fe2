#include <iostream>

#include "kgprop/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return kgp::cli::run(args, std::cout, std::cerr);
}
