#include "cctlab/cli.hpp"

int main(int argc, char** argv) { return cctlab::run_cli(argc, argv); }
