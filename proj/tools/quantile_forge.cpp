#include <iostream>
#include <string>
#include <vector>

#include "qforge/cli.hpp"

int main(int argc, char** argv) {
    return qforge::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
