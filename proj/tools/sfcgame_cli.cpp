#include <iostream>
#include <string>
#include <vector>

#include "sfcgame/commands.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return sfcgame::cli::run(args, std::cout, std::cerr);
}
