#include "lcl/cli.hpp"

int main(int argc, char** argv) { return lcl::cli_main(argc, argv); }
