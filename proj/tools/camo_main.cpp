#include "camo/harness/cli.hpp"

int main(int argc, char** argv) { return camo::harness::run_cli(argc, argv); }
