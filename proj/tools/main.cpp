#include "sregret/cli.hpp"

int main(int argc, char** argv) { return sregret::cli::run(argc, argv); }
