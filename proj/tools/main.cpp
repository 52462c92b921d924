#include <iostream>
#include <string>
#include <vector>

#include "stancekit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return stancekit::run_cli(args, std::cout, std::cerr);
}
