#include "spme/cli.hpp"

int main(int argc, char** argv) { return spme::cli::run(argc, argv); }
