#include <iostream>
#include <string>
#include <vector>

#include "manet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return manet::dispatch(args, std::cout, std::cerr);
}
