// SPDX-License-Identifier: Apache-2.0
//
// helmscat: exterior Helmholtz obstacle scattering toolkit.
// ------------------------------------------------------------------------

#include <iostream>

#include "helmscat/cli.hpp"

int main(int argc, char **argv)
{
    return helmscat::cli::run(argc, argv, std::cout, std::cerr);
}
