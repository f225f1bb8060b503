#include <iostream>

#include "attrarith/cli.hpp"

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    const auto res = attrarith::cli::run(args, attrarith::cli::Environment::from_process());
    std::cout << res.out;
    std::cerr << res.err;
    return res.exit_code;
}
