#include <iostream>
#include <string>
#include <vector>

#include "dgauss/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dgauss::cli::run(args, std::cout, std::cerr);
}
