#include "profin/cli.hpp"

int main(int argc, char** argv) { return profin::cli_main(argc, argv); }
