#include "cmbeam/cli.hpp"

int main(int argc, char** argv) { return cmbeam::cli_main(argc, argv); }
