#include <iostream>
#include <string>
#include <vector>

#include "dshell/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dshell::cli::main(args, std::cout, std::cerr);
}
