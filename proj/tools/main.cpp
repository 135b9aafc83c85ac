#include <iostream>

#include "portwar/cli.hpp"

int main(int argc, char** argv) {
    return portwar::run_cli(argc, argv, std::cout, std::cerr);
}
