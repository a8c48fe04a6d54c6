#include <iostream>
#include <string>
#include <vector>

#include "page_entropy/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return page_entropy::cli::run(args, std::cout, std::cerr);
}
