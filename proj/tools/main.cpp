#include "cli.hpp"

int main(int argc, char** argv) { return raddiff::cli::main(argc, argv); }
