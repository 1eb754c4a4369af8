#include <bifurcus/cli.hpp>

#include <iostream>

int main(int argc, char** argv) {
    return bifurcus::cli::main_entry(argc, argv, std::cout, std::cerr);
}
