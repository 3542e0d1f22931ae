#include "regsim/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return regsim::run_cli(argc, argv, std::cout, std::cerr);
}
