#include "stiffnet/cli.hpp"

int main(int argc, char** argv) { return stiffnet::cli::run(argc, argv); }
