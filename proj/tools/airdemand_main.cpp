#include "airdemand/cli.hpp"

int main(int argc, char** argv) { return airdemand::cli_main(argc, argv); }
