#include "slopefilt/cli.hpp"

int main(int argc, char** argv) { return slopefilt::cli::run(argc, argv); }
