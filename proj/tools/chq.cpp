#include "chq/cli.hpp"

int main(int argc, char** argv) { return chq::run_cli(argc, argv); }
