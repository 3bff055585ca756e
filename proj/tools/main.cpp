#include "polardyn/cli.hpp"

int main(int argc, char** argv) { return polardyn::cli::run(argc, argv); }
