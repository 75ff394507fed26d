#include <iostream>

#include "fineval/cli.hpp"

int main(int argc, char** argv)
{
    return fineval::cli::run(argc, argv, std::cout, std::cerr);
}
