// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "kptrack_tools/cli.hpp"

int main(int argc, char** argv)
{
    return kptrack::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
