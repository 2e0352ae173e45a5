#include <iostream>
#include <string>
#include <vector>

#include "gpa/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gpa::run_cli(args, std::cout, std::cerr);
}
