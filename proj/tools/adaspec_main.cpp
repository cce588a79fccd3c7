#include "adaspec/cli.hpp"

int main(int argc, char** argv) { return adaspec::cli_main(argc, argv); }
