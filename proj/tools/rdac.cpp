#include "rdac/cli.hpp"

int main(int argc, char** argv) { return rdac::cli::run(argc, argv); }
