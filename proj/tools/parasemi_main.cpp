#include "parasemi/cli.hpp"

int main(int argc, char** argv) { return parasemi::cli_main(argc, argv); }
