#include "alq/cli.hpp"

int main(int argc, char** argv) { return alq::cli::run_cli(argc, argv); }
