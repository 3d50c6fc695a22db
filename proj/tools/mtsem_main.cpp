#include <string>
#include <vector>

#include "mtsem/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mtsem::run_cli(args);
}
