#include <iostream>
#include <string>
#include <vector>

#include "reasons/cli.hpp"

int main(int argc, char** argv) {
    return reasons::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
