#include "chirpsense/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return chirpsense::run_cli(args);
}
