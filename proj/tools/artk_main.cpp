#include "artk/cli.hpp"

int main(int argc, char** argv) { return artk::cli::main(argc, argv); }
