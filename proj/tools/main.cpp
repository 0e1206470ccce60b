#include <string>
#include <vector>

#include "biphoton/run.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return biphoton::cli_main(args);
}
