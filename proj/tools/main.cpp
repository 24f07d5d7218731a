#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <motun/cli.hpp>

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return motun::run_cli(motun::parse_cli(args));
    } catch (const motun::UsageError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
