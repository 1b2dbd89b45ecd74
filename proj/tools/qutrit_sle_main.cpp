#include <iostream>

#include "qutrit_sle/cli.hpp"

int main(int argc, char** argv) {
    return qutrit_sle::cli::run_cli(argc, argv, std::cout, std::cerr);
}
