#include "bwbroker/cli.hpp"

int main(int argc, char** argv) { return bwbroker::cli::run_cli(argc, argv); }
