#include "panto/cli.hpp"

int main(int argc, char** argv) { return panto::cli::run(argc, argv); }
