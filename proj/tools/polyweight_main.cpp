#include "polyweight/cli.hpp"

int main(int argc, char** argv) { return polyweight::cli::main_entry(argc, argv); }
