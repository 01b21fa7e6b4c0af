#include "preb/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return preb::cli::run(argc, argv, std::cout, std::cerr);
}
