#include <iostream>

#include "hopw/cli/run.hpp"

int main(int argc, char** argv)
{
    return hopw::cli::run_main(argc, argv, std::cout, std::cerr);
}
